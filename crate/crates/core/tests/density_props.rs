mod common;

use common::{matrix, nonzero_poly, small_coeff};
use nsbound_core::density::linear_spaced;
use nsbound_core::{
    analyze, log_spaced, matrix_density, op_norm_estimate, scalar_density, universal_constant, AnalyzeOptions,
    Exponent, GaussianRational, HermitianMatrix, LaurentPoly, PolyMatrix, TorusGrid,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn z_minus(a: GaussianRational) -> LaurentPoly {
    &LaurentPoly::var(1, 0) - &LaurentPoly::constant(1, a)
}

fn unsorted_pair_lambdas() -> Vec<f64> {
    log_spaced(1e-3, 50.0, 48).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn scaling_moves_lambda_exactly(p in (1usize..=2).prop_flat_map(|d| nonzero_poly(d, 4, 3)), c in small_coeff()) {
        let grid = TorusGrid::midpoint(p.dim(), if p.dim() == 1 { 2000 } else { 60 }).unwrap();
        let lambdas = unsorted_pair_lambdas();
        let c_abs = c.to_complex64().norm();
        let scaled: Vec<f64> = lambdas.iter().map(|l| l / c_abs).collect();
        let f_cp = scalar_density(&p.scale(&c), &lambdas, &grid).unwrap();
        let f_p = scalar_density(&p, &scaled, &grid).unwrap();
        prop_assert_eq!(f_cp.counts, f_p.counts);
    }

    #[test]
    fn curves_are_monotone(a in matrix(2, 3, 1, 3)) {
        prop_assume!(!a.is_zero());
        let k = a.max_nonvanishing_minor(1_000_000).unwrap().size();
        let grid = TorusGrid::midpoint(1, 500).unwrap();
        let c = matrix_density(&a, k, &log_spaced(1e-4, 1e3, 40).unwrap(), &grid).unwrap();
        prop_assert!(c.estimates.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(*c.estimates.last().unwrap(), 3.0);
    }

    #[test]
    fn diagonal_blocks_add(p in nonzero_poly(2, 4, 3), q in nonzero_poly(2, 4, 3)) {
        let grid = TorusGrid::midpoint(2, 40).unwrap();
        let lambdas = log_spaced(1e-3, 1e3, 50).unwrap();
        let diag = PolyMatrix::diagonal(vec![p.clone(), q.clone()]).unwrap();
        let fd = matrix_density(&diag, 2, &lambdas, &grid).unwrap();
        let fp = scalar_density(&p, &lambdas, &grid).unwrap();
        let fq = scalar_density(&q, &lambdas, &grid).unwrap();
        let sum: Vec<u64> = fp.counts.iter().zip(&fq.counts).map(|(a, b)| a + b).collect();
        prop_assert_eq!(fd.counts, sum);
    }

    #[test]
    fn op_norm_estimate_is_below_upper_bound(a in (1usize..=3, 1usize..=3).prop_flat_map(|(m, n)| matrix(m, n, 2, 3))) {
        let grid = TorusGrid::midpoint(2, 30).unwrap();
        prop_assert!(op_norm_estimate(&a, &grid).unwrap() <= a.op_norm_upper() + 1e-9);
    }
}

fn complex_entries(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)), n)
}

fn gram(n: usize, g: &[Complex64]) -> HermitianMatrix {
    let mut h = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] = (0..n).map(|r| g[i * n + r] * g[j * n + r].conj()).sum();
        }
    }
    HermitianMatrix::from_row_major(n, h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn jacobi_residuals((n, g) in (1usize..=6).prop_flat_map(|n| (Just(n), complex_entries(n * n)))) {
        let h = gram(n, &g);
        let r = h.eigenvalues().unwrap();
        let trace = h.trace();
        let sum: f64 = r.eigenvalues.iter().sum();
        prop_assert!((sum - trace).abs() <= 1e-10 * trace.max(f64::MIN_POSITIVE));
        prop_assert!(r.off_diagonal <= 1e-12 * trace.max(1.0));
        if n == 2 {
            let (a, d, b) = (h.get(0, 0).re, h.get(1, 1).re, h.get(0, 1).norm_sqr());
            let disc = ((a - d) * (a - d) + 4.0 * b).sqrt();
            let lo = (a + d - disc) / 2.0;
            let hi = (a + d + disc) / 2.0;
            prop_assert!((r.eigenvalues[0] - lo).abs() <= 1e-10 * (1.0 + trace));
            prop_assert!((r.eigenvalues[1] - hi).abs() <= 1e-10 * (1.0 + trace));
        }
    }
}

#[test]
fn linear_factor_density_below_universal_line() {
    let grid = TorusGrid::midpoint(1, 100_000).unwrap();
    let eps = grid.tolerance(4.0);
    let lambdas = linear_spaced(0.0, 3.0, 301).unwrap();
    let roots = [
        GaussianRational::from_ratios(1, 2, 0, 1),
        GaussianRational::from_integer(1),
        GaussianRational::from_integer(2),
        GaussianRational::i(),
        GaussianRational::from_ratios(1, 1, 1, 1),
    ];
    for a in roots {
        let c = scalar_density(&z_minus(a.clone()), &lambdas, &grid).unwrap();
        for (l, f) in lambdas.iter().zip(&c.estimates) {
            assert!(*f <= universal_constant() * l + eps, "a = {a:?}, λ = {l}: {f}");
        }
    }
}

#[test]
fn bound_dominates_density_on_small_instances() {
    let zm1 = z_minus(GaussianRational::from_integer(1));
    let cube = &(&zm1 * &zm1) * &zm1;
    let mono = LaurentPoly::monomial(Exponent::new(vec![1, -2]), GaussianRational::from_integer(3));
    let two_var = &(&LaurentPoly::var(2, 0) + &LaurentPoly::var(2, 1)) - &LaurentPoly::one(2);
    let cases = vec![
        PolyMatrix::scalar(zm1.clone()),
        PolyMatrix::scalar(cube),
        PolyMatrix::scalar(mono),
        PolyMatrix::scalar(two_var),
        PolyMatrix::from_rows(vec![vec![zm1.clone(), LaurentPoly::one(1)], vec![LaurentPoly::zero(1), zm1]]).unwrap(),
    ];
    for a in cases {
        let report = analyze(&a, &AnalyzeOptions::default()).unwrap();
        let grid = TorusGrid::midpoint(a.dim(), if a.dim() == 1 { 20_000 } else { 300 }).unwrap();
        let eps = grid.tolerance(4.0);
        let lambdas = log_spaced(1e-4, 10.0, 40).unwrap();
        let curve = matrix_density(&a, report.params.k, &lambdas, &grid).unwrap();
        for (l, e) in lambdas.iter().zip(curve.excess()) {
            assert!(e <= report.bound_at(*l) + eps, "{a:?} at λ = {l}: {e} > {}", report.bound_at(*l));
        }
    }
}
