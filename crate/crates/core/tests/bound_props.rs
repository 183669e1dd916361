mod common;

use common::{matrix, nonzero_poly, small_coeff};
use nsbound_core::bound::{best_ordering, scalar_bound};
use nsbound_core::width::identity_order;
use nsbound_core::{
    analyze, matrix_bound, rescale_lambda, universal_constant, width_profile, AnalyzeOptions, BoundError,
    BoundParameters, OrderingMode,
};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = BoundParameters> {
    (1usize..=5, 1usize..=4, 1u64..=6, 1e-3f64..1e3, 0.5f64..1e3)
        .prop_map(|(k, d, wd, lead, b)| BoundParameters::new(k, d, wd, lead, b).unwrap())
}

#[test]
fn constant_squares_to_rational_value() {
    let c = universal_constant();
    assert!((c * c * 47.0 / 192.0 - 1.0).abs() < 1e-12);
}

#[test]
fn cosine_inequality_on_half_interval() {
    let n = 100_000;
    for i in 0..=n {
        let x = -0.5 + i as f64 / n as f64;
        assert!(47.0 / 48.0 * x * x <= 2.0 - 2.0 * x.cos() + 1e-15, "x = {x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn matrix_bound_is_rescaled_scalar_bound(p in params(), lambda in 1e-8f64..10.0) {
        let lhs = matrix_bound(&p, lambda).unwrap();
        let rhs = p.k as f64 * scalar_bound(p.d, p.wd, p.lead_abs, rescale_lambda(p.k, p.b_l1, lambda)).unwrap();
        prop_assert!((lhs / rhs - 1.0).abs() < 1e-12, "{lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matrix_bound_grows_with_lambda(p in params(), a in 1e-8f64..10.0, b in 1e-8f64..10.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(matrix_bound(&p, lo).unwrap() <= matrix_bound(&p, hi).unwrap());
    }

    #[test]
    fn scaling_scales_lead_only(p in (1usize..=3).prop_flat_map(|d| nonzero_poly(d, 6, 3)), c in small_coeff()) {
        let order = identity_order(p.dim());
        let base = width_profile(&p, &order).unwrap();
        let scaled = width_profile(&p.scale(&c), &order).unwrap();
        prop_assert_eq!(base.wd, scaled.wd);
        prop_assert_eq!(&scaled.lead, &(&base.lead * &c));
    }

    #[test]
    fn report_exponent_ignores_coefficient_scale(a in matrix(2, 3, 2, 2), c in small_coeff()) {
        prop_assume!(!a.is_zero());
        let scaled_rows: Vec<Vec<_>> = (0..a.rows()).map(|i| a.row(i).iter().map(|e| e.scale(&c)).collect()).collect();
        let b = nsbound_core::PolyMatrix::from_rows(scaled_rows).unwrap();
        let ra = analyze(&a, &AnalyzeOptions::default()).unwrap();
        let rb = analyze(&b, &AnalyzeOptions::default()).unwrap();
        prop_assert_eq!(ra.exponent, rb.exponent);
        prop_assert_eq!(ra.params.k, rb.params.k);
    }

    #[test]
    fn exhaustive_ordering_never_widens(p in (1usize..=3).prop_flat_map(|d| nonzero_poly(d, 6, 4))) {
        let fixed = best_ordering(&p, OrderingMode::Fixed).unwrap();
        let best = best_ordering(&p, OrderingMode::Exhaustive).unwrap();
        prop_assert!(best.scaled_width() <= fixed.scaled_width());
    }
}

#[test]
fn zero_width_has_no_exponent() {
    let p = BoundParameters::new(1, 2, 0, 5.0, 5.0).unwrap();
    assert_eq!(p.exponent(), None);
    assert_eq!(matrix_bound(&p, 1.0), Err(BoundError::ZeroWidth));
}
