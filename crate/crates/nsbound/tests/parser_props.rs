use nsbound::text::{format_matrix, format_poly, parse_matrix, parse_poly};
use nsbound_core::{Exponent, GaussianRational, LaurentPoly, PolyMatrix};
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = GaussianRational> {
    let part = (-10_000i64..=10_000, 1i64..=10_000);
    (part.clone(), part, 0u8..4).prop_map(|((a, b), (c, d), shape)| match shape {
        0 => GaussianRational::from_ratios(a, b, 0, 1),
        1 => GaussianRational::from_ratios(0, 1, c, d),
        _ => GaussianRational::from_ratios(a, b, c, d),
    })
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    (1usize..=3).prop_flat_map(|d| {
        prop::collection::vec((prop::collection::vec(-9i64..=9, d), coeff()), 0..=10).prop_map(move |t| {
            LaurentPoly::from_terms(d, t.into_iter().map(|(e, c)| (Exponent::new(e), c))).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn format_then_parse_is_identity(p in poly()) {
        let text = format_poly(&p);
        prop_assert_eq!(parse_poly(&text, Some(p.dim())).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn distinct_polynomials_format_differently(p in poly(), q in poly()) {
        let (p, q) = (p.embed(3).unwrap(), q.embed(3).unwrap());
        prop_assert_eq!(p == q, format_poly(&p) == format_poly(&q));
    }

    #[test]
    fn matrices_round_trip(entries in prop::collection::vec(poly(), 6)) {
        let rows: Vec<Vec<LaurentPoly>> = entries.chunks(3).map(|r| r.to_vec()).collect();
        let a = PolyMatrix::from_rows_embedded(rows).unwrap();
        let b = parse_matrix(&format_matrix(&a)).unwrap();
        // Parsing infers the dimension from the variables that actually occur.
        let b = PolyMatrix::from_rows((0..b.rows()).map(|i| b.row(i).iter().map(|e| e.embed(a.dim()).unwrap()).collect()).collect()).unwrap();
        prop_assert_eq!(b, a);
    }

    #[test]
    fn error_spans_stay_inside_input(s in "[-+*/^()\\[\\],.0-9iz# \n]{0,40}") {
        if let Err(e) = parse_poly(&s, None) {
            prop_assert!(e.span.start <= e.span.end && e.span.end <= s.len(), "{e:?} for {s:?}");
        }
        if let Err(e) = parse_matrix(&s) {
            prop_assert!(e.span.start <= e.span.end && e.span.end <= s.len(), "{e:?} for {s:?}");
        }
    }
}
