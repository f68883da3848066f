use std::f64::consts::PI;

use fourbessel::oracle::{gauss_legendre, quad_bessel_numeric, QuadratureConfig};
use fourbessel::quadbessel::{
    evaluate, evaluate_with, j_special, legendre_ratio_integral, quad_bessel_analytic,
    quad_bessel_paired, triple_bessel_weighted, Formula, IntegralSpec, Method,
};
use fourbessel::wigner::select_bridge_order;
use fourbessel::Error;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn spec(lambda: [u32; 4], k1: f64, k2: f64) -> IntegralSpec {
    IntegralSpec::new(lambda, k1, k2).unwrap()
}

/// Rounding-level tolerance for a general-route value: the terms cancel, so
/// the attainable relative accuracy scales with `sum |term| / |value|`.
fn general_tolerance(lambda: [u32; 4], k1: f64, k2: f64) -> f64 {
    let r = quad_bessel_analytic(&spec(lambda, k1, k2)).unwrap();
    let magnitude: f64 = r.terms.iter().map(|t| t.value.abs()).sum();
    1e-13_f64.max(64.0 * f64::EPSILON * magnitude / r.value.abs())
}

#[test]
fn oracle_agreement_on_parity_valid_grid() {
    let cfg = QuadratureConfig::default();
    let mut worst = (0.0, String::new());
    for (k1, k2) in [(1.0, 2.0), (1.0, 3.0), (2.0, 5.0), (1.0, 1.25)] {
        for code in 0..256u32 {
            let lambda = [code % 4, (code / 4) % 4, (code / 16) % 4, (code / 64) % 4];
            if (lambda[0] + lambda[1]) % 2 != (lambda[2] + lambda[3]) % 2 {
                continue;
            }
            // matching parity is not enough: (2,0,0,0) has disjoint windows {2} and {0}
            if select_bridge_order(lambda[0], lambda[1], lambda[2], lambda[3]).is_err() {
                assert!(!is_window_overlap(lambda), "{lambda:?}");
                continue;
            }
            let analytic = evaluate(&spec(lambda, k1, k2)).unwrap().value;
            let oracle = quad_bessel_numeric(&spec(lambda, k1, k2), &cfg)
                .unwrap()
                .value;
            let err = rel(analytic, oracle);
            if err > worst.0 {
                worst = (err, format!("{lambda:?} k=({k1},{k2})"));
            }
        }
    }
    assert!(worst.0 <= 1e-6, "worst {} at {}", worst.0, worst.1);
}

fn is_window_overlap(l: [u32; 4]) -> bool {
    l[0].abs_diff(l[1]).max(l[2].abs_diff(l[3])) <= (l[0] + l[1]).min(l[2] + l[3])
}

#[test]
fn j_special_matches_direct_quadrature() {
    // J(1,1,0; 1,2) = int_1^3 P_1(Delta)^2 dK with Delta = (5 - K^2)/4
    assert!(rel(j_special(1, 1, 0, 1.0, 2.0).unwrap(), 11.0 / 15.0) < 1e-14);
    for (l, lp, big_l) in [(1, 1, 1), (2, 0, 2), (2, 3, 3), (4, 2, 1)] {
        let (k1, k2) = (1.0, 2.0);
        let direct = gauss_legendre(
            |kk: f64| {
                let delta = (k1 * k1 + k2 * k2 - kk * kk) / (2.0 * k1 * k2);
                fourbessel::legendre::legendre_p_unchecked(l, delta)
                    * fourbessel::legendre::legendre_p_unchecked(lp, delta)
                    / kk.powi(2 * big_l as i32)
            },
            1.0,
            3.0,
            60,
        );
        let analytic = j_special(l, lp, big_l, k1, k2).unwrap();
        assert!(
            rel(analytic, direct) < 1e-12,
            "({l},{lp},{big_l}): {analytic} vs {direct}"
        );
    }
}

#[test]
fn ratio_integral_example() {
    // int_{-1}^{1} t (5/4 - t)^(-3/2) dt = 4/3
    assert!(rel(legendre_ratio_integral(1, 0, 1, 1.25).unwrap(), 4.0 / 3.0) < 1e-14);
}

#[test]
fn reconstruction_of_j_from_ratio_integral() {
    for (k1, k2) in [(1.0, 2.0), (2.0, 5.0), (1.0, 1.25), (3.0, 0.7)] {
        let y = (k1 * k1 + k2 * k2) / (2.0 * k1 * k2);
        for l in 0..=3 {
            for lp in 0..=3 {
                for big_l in 0..=3u32 {
                    let j = j_special(l, lp, big_l, k1, k2).unwrap();
                    let scale = k1 * k2 / (2.0 * k1 * k2).powf(f64::from(big_l) + 0.5);
                    let via_ratio = scale * legendre_ratio_integral(l, lp, big_l, y).unwrap();
                    assert!(
                        rel(j, via_ratio) < 1e-12,
                        "l={l} lp={lp} L={big_l} k=({k1},{k2})"
                    );
                }
            }
        }
    }
}

#[test]
fn analytic_example_values() {
    let v = quad_bessel_analytic(&spec([1, 1, 1, 1], 1.0, 2.0))
        .unwrap()
        .value;
    assert!(rel(v, 11.0 * PI / 480.0) < 1e-14);
    let v = quad_bessel_analytic(&spec([1, 0, 1, 0], 1.0, 2.0))
        .unwrap()
        .value;
    assert!(rel(v, PI / 48.0) < 1e-14, "{v}");
}

#[test]
fn degenerate_momenta_only_for_positive_bridge_orders() {
    let r = quad_bessel_analytic(&spec([1, 1, 2, 2], 2.0, 2.0)).unwrap();
    assert_eq!(r.bridge_l, Some(0));
    assert!(rel(r.value, quad_bessel_paired(1, 2, 2.0, 2.0).unwrap().value) < 1e-13);
    let err = quad_bessel_analytic(&spec([2, 1, 1, 2], 2.0, 2.0 * (1.0 + 1e-10))).unwrap_err();
    assert!(matches!(err, Error::DegenerateMomenta { bridge: 1, .. }));
}

fn valid_lambda() -> impl Strategy<Value = [u32; 4]> {
    prop::array::uniform4(0u32..=3).prop_filter("parity-valid", |l| {
        select_bridge_order(l[0], l[1], l[2], l[3]).is_ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn report_value_is_compensated_sum_of_terms(lambda in valid_lambda(), k1 in 0.3f64..4.0, ratio in 1.1f64..5.0) {
        let r = quad_bessel_analytic(&spec(lambda, k1, k1 * ratio)).unwrap();
        prop_assert!((r.value - r.recomputed_sum()).abs() <= 1e-13 * r.value.abs());
    }

    #[test]
    fn general_and_paired_paths_agree(a in 0u32..=3, b in 0u32..=3, k1 in 0.3f64..4.0, ratio in 1.5f64..6.0) {
        let k2 = k1 * ratio;
        let general = quad_bessel_analytic(&spec([a, a, b, b], k1, k2)).unwrap().value;
        let paired = quad_bessel_paired(a, b, k1, k2).unwrap().value;
        prop_assert!(rel(general, paired) <= 1e-12);
    }

    #[test]
    fn general_route_swap_symmetry(lambda in valid_lambda(), k1 in 0.3f64..4.0, ratio in 1.1f64..5.0) {
        let k2 = k1 * ratio;
        let [l1, l2, l3, l4] = lambda;
        let base = evaluate_with(&spec(lambda, k1, k2), Formula::General).unwrap().value;
        let tol = general_tolerance(lambda, k1, k2);
        for (image, kk1, kk2) in [([l3, l2, l1, l4], k1, k2), ([l1, l4, l3, l2], k1, k2), ([l2, l1, l4, l3], k2, k1)] {
            let v = evaluate_with(&spec(image, kk1, kk2), Formula::General).unwrap().value;
            let tol = tol.max(general_tolerance(image, kk1, kk2));
            prop_assert!(rel(v, base) <= tol, "{:?} -> {:?}: {} vs {} (tol {})", lambda, image, v, base, tol);
        }
    }

    #[test]
    fn scale_covariance(lambda in valid_lambda(), k1 in 0.3f64..4.0, ratio in 1.1f64..5.0) {
        let k2 = k1 * ratio;
        let base = evaluate(&spec(lambda, k1, k2)).unwrap();
        let tol = match base.method {
            Method::Paired => 1e-12,
            _ => general_tolerance(lambda, k1, k2).max(1e-12),
        };
        for c in [0.5, 2.0, 10.0] {
            let scaled = evaluate(&spec(lambda, c * k1, c * k2)).unwrap().value;
            prop_assert!(rel(scaled * c * c * c, base.value) <= tol);
        }
    }

    #[test]
    fn triple_vanishes_exactly_outside_band(l1 in 0u32..=3, l2 in 0u32..=3, k1 in 0.1f64..5.0, k2 in 0.1f64..5.0, t in 0.0f64..1.0) {
        let lo = (k1 - k2).abs();
        let hi = k1 + k2;
        for big_k in [lo * t * 0.999, hi * (1.0001 + t)] {
            if big_k <= 0.0 {
                continue;
            }
            let big_l = l1.abs_diff(l2);
            let v = triple_bessel_weighted(l1, l2, big_l, k1, k2, big_k).unwrap();
            prop_assert_eq!(v.to_bits(), 0.0f64.to_bits());
        }
    }
}
