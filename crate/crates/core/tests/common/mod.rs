#![allow(dead_code)]

use nsbound_core::{Exponent, GaussianRational, LaurentPoly, PolyMatrix};
use proptest::prelude::*;

/// Gaussian rational with numerators in `[-num, num]` and denominators in `[1, den]`.
pub fn coeff(num: i64, den: i64) -> impl Strategy<Value = GaussianRational> + Clone {
    (-num..=num, 1..=den, -num..=num, 1..=den)
        .prop_map(|(a, b, c, d)| GaussianRational::from_ratios(a, b, c, d))
}

/// Small Gaussian-integer coefficients, never zero.
pub fn small_coeff() -> impl Strategy<Value = GaussianRational> + Clone {
    (-3i64..=3, -3i64..=3)
        .prop_filter("non-zero", |(a, b)| *a != 0 || *b != 0)
        .prop_map(|(a, b)| GaussianRational::from_ratios(a, 1, b, 1))
}

pub fn poly_with(
    dim: usize,
    max_terms: usize,
    exp: i64,
    c: impl Strategy<Value = GaussianRational> + Clone,
) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-exp..=exp, dim), c), 0..=max_terms).prop_map(move |terms| {
        LaurentPoly::from_terms(dim, terms.into_iter().map(|(e, c)| (Exponent::new(e), c))).unwrap()
    })
}

pub fn nonzero_poly(dim: usize, max_terms: usize, exp: i64) -> impl Strategy<Value = LaurentPoly> {
    poly_with(dim, max_terms, exp, coeff(20, 6)).prop_filter("non-zero", |p| !p.is_zero())
}

/// Polynomial in `1..=3` variables together with its dimension.
pub fn any_poly(max_terms: usize, exp: i64) -> impl Strategy<Value = LaurentPoly> {
    (1usize..=3).prop_flat_map(move |d| poly_with(d, max_terms, exp, coeff(20, 6)))
}

pub fn matrix(rows: usize, cols: usize, dim: usize, max_terms: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(poly_with(dim, max_terms, 2, small_coeff()), rows * cols).prop_map(move |e| {
        let rows_v: Vec<Vec<LaurentPoly>> = e.chunks(cols).map(|r| r.to_vec()).collect();
        PolyMatrix::from_rows(rows_v).unwrap()
    })
}

pub fn angles(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..std::f64::consts::TAU, dim)
}
