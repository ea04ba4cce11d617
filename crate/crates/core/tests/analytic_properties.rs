use num_traits::One;
use proptest::prelude::*;

use fracperc::analytic::{
    dims, ev_vk, ev_vk_1d, ev_vk_complement_1d, ev_vk_intersect_1d, limit_vck_1d, limit_vck_2d, limit_vk_1d,
    limit_vk_2d, rescaled_series, vbarc0_2d_finite, Copies, ExactParams, ModelParams, Target,
};
use fracperc::oracle::{enumerate_1d, enumerate_2d, Quantity1D, Set1D};
use fracperc::{Exact, Scalar};

/// Rational `p = a/b` strictly inside `(lo, 1)` for an integer bound `lo = 1/M^e`.
fn p_above(m: u32, e: u32) -> impl Strategy<Value = Exact> {
    let floor = (m as i64).pow(e);
    (1i64..=997).prop_map(move |t| {
        Exact::ratio(1000 + t * (floor - 1), 1000 * floor)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn area_limit_is_one((m, p) in (2u32..80).prop_flat_map(|m| (Just(m), p_above(m, 2)))) {
        let par = ExactParams::new(m, p, 2).unwrap();
        prop_assert_eq!(limit_vk_2d(&par, 2).unwrap(), Exact::one());
    }

    #[test]
    fn boundary_limits_coincide((m, p) in (2u32..60).prop_flat_map(|m| (Just(m), p_above(m, 1)))) {
        let par = ExactParams::new(m, p.clone(), 2).unwrap();
        prop_assert_eq!(limit_vck_2d(&par, 1).unwrap(), limit_vk_2d(&par, 1).unwrap());
        let line = ExactParams::new(m, p, 1).unwrap();
        prop_assert_eq!(limit_vck_1d(&line, 0).unwrap(), limit_vk_1d(&line, 0).unwrap());
    }

    #[test]
    fn line_formulas_match_enumeration(m in 2u32..=3, a in 0i64..=9, b in 1i64..=9) {
        prop_assume!(a <= b);
        let p = Exact::ratio(a, b);
        let par = ExactParams::new(m, p.clone(), 1).unwrap();
        for n in 0..=(4 - m) {
            prop_assert_eq!(ev_vk_1d(&par, n, 0).unwrap(), enumerate_1d(m, &p, n, Set1D::K, Quantity1D::V0).unwrap());
            prop_assert_eq!(
                ev_vk_intersect_1d(&par, n, 1).unwrap(),
                enumerate_1d(m, &p, n, Set1D::KK, Quantity1D::V1).unwrap()
            );
            prop_assert_eq!(
                ev_vk_complement_1d(&par, n, 0, Copies::Two).unwrap(),
                enumerate_1d(m, &p, n, Set1D::DD, Quantity1D::V0).unwrap()
            );
        }
    }

    #[test]
    fn square_formulas_match_enumeration(m in 2u32..=3, a in 0i64..=7, b in 1i64..=7, k in 0u8..=2) {
        prop_assume!(a <= b);
        let p = Exact::ratio(a, b);
        let par = ExactParams::new(m, p.clone(), 2).unwrap();
        for target in [Target::F, Target::C] {
            prop_assert_eq!(ev_vk(&par, 1, k, target).unwrap(), enumerate_2d(m, &p, 1, k, target).unwrap());
        }
    }

    #[test]
    fn dimension_formula(m in 2u32..1000, p in 0.001f64..=1.0) {
        let r = dims(&ModelParams::new(m, p, 2).unwrap()).unwrap();
        let expect = 2.0 - (1.0 / p).ln() / (m as f64).ln();
        prop_assert!((r.d - expect).abs() < 1e-12);
        prop_assert!((r.d3.unwrap() - (2.0 * r.d - 3.0)).abs() < 1e-12);
        prop_assert_eq!(r.non_empty, (m * m) as f64 * p > 1.0);
    }

    #[test]
    fn rescaled_terms_approach_limit(m in 2u32..12, t in 0.05f64..0.95) {
        let p = 1.0 / (m * m) as f64 + t * (1.0 - 1.0 / (m * m) as f64);
        let par = ModelParams::new(m, p, 2).unwrap();
        let series = rescaled_series(&par, 0, Target::F, 60).unwrap();
        let limit = series.limit.unwrap();
        let last = series.terms[60];
        prop_assert!((last - limit).abs() <= 1e-6 * limit.abs().max(1.0));
    }
}

#[test]
fn boundary_limit_decreases_in_p() {
    for m in 2..=64u32 {
        let lo = 1.0 / (m * m) as f64;
        let mut prev = f64::INFINITY;
        let mut p = lo + 1e-3;
        while p < 1.0 {
            let v = limit_vk_2d(&ModelParams::new(m, p, 2).unwrap(), 1).unwrap();
            assert!(v < prev, "M={m}, p={p}");
            prev = v;
            p += 1e-3;
        }
    }
}

#[test]
fn complement_expansion_converges_to_limit() {
    for (m, p) in [(2, 0.6), (3, 0.5), (5, 0.9)] {
        let par = ModelParams::new(m, p, 2).unwrap();
        let limit = limit_vck_2d(&par, 0).unwrap();
        let far = vbarc0_2d_finite(&par, 200).unwrap().vbar;
        assert!((far - limit).abs() < 1e-10, "M={m}, p={p}: {far} vs {limit}");
    }
}

#[test]
fn exact_and_float_modes_agree() {
    for m in [2u32, 3, 7] {
        for (a, b) in [(1i64, 3i64), (2, 3), (9, 10)] {
            let ex = ExactParams::new(m, Exact::ratio(a, b), 2).unwrap();
            let fl = ex.to_f64();
            for n in 0..10 {
                for k in 0..=2 {
                    for target in [Target::F, Target::C] {
                        let e = ev_vk(&ex, n, k, target).unwrap().to_f64();
                        let f = ev_vk(&fl, n, k, target).unwrap();
                        assert!((e - f).abs() <= 1e-10 * e.abs().max(1.0), "M={m} p={a}/{b} n={n} k={k} {target}");
                    }
                }
            }
        }
    }
}
