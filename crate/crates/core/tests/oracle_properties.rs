use std::f64::consts::PI;

use fourbessel::oracle::{
    gauss_legendre, quad_bessel_numeric, triple_bessel_numeric, QuadratureConfig,
};
use fourbessel::quadbessel::{triple_bessel_weighted, IntegralSpec};

fn spec(lambda: [u32; 4], k1: f64, k2: f64) -> IntegralSpec {
    IntegralSpec::new(lambda, k1, k2).unwrap()
}

#[test]
fn closure_reproduces_four_bessel_value() {
    // (2/pi) int K^2 T(K)^2 dK over the band, with T the closed triple integral
    let (k1, k2) = (1.0f64, 2.0f64);
    let v = 2.0 / PI
        * gauss_legendre(
            |kk| kk * kk * triple_bessel_weighted(0, 0, 0, k1, k2, kk).unwrap().powi(2),
            (k1 - k2).abs(),
            k1 + k2,
            20,
        );
    assert!((v - PI / 16.0).abs() / (PI / 16.0) < 1e-8);
}

#[test]
fn halving_tolerance_moves_value_less_than_estimate() {
    let cfg = QuadratureConfig::default();
    let tight = QuadratureConfig {
        rel_tol: cfg.rel_tol / 2.0,
        ..cfg
    };
    let mut specs = Vec::new();
    for (k1, k2) in [(1.0, 2.0), (2.0, 5.0), (1.0, 1.25), (3.0, 3.0)] {
        for a in 0..=3 {
            for b in 0..=3 {
                specs.push(spec([a, a, b, b], k1, k2));
            }
        }
    }
    for lambda in [[2, 0, 0, 2], [1, 0, 1, 2], [2, 1, 1, 2], [1, 0, 1, 0]] {
        for (k1, k2) in [(1.0, 2.0), (2.0, 5.0)] {
            specs.push(spec(lambda, k1, k2));
        }
    }
    for s in specs {
        let a = quad_bessel_numeric(&s, &cfg).unwrap();
        let b = quad_bessel_numeric(&s, &tight).unwrap();
        assert!(
            (a.value - b.value).abs() < a.error_estimate,
            "{s:?}: {} vs {} (estimate {})",
            a.value,
            b.value,
            a.error_estimate
        );
    }
}

#[test]
fn converges_at_equal_momenta() {
    let cfg = QuadratureConfig::default();
    for code in 0..256u32 {
        let lambda = [code % 4, (code / 4) % 4, (code / 16) % 4, (code / 64) % 4];
        if lambda.iter().sum::<u32>() % 2 != 0 {
            continue;
        }
        for k in [1.0, 2.5] {
            let r = quad_bessel_numeric(&spec(lambda, k, k), &cfg);
            assert!(r.is_ok(), "{lambda:?} k={k}: {r:?}");
        }
    }
}

#[test]
fn triple_examples() {
    let cfg = QuadratureConfig::default();
    let r = triple_bessel_numeric(0, 0, 0, 1.0, 2.0, 2.0, &cfg).unwrap();
    assert!((r.value - PI / 16.0).abs() / (PI / 16.0) < 1e-7);
    let r = triple_bessel_numeric(0, 0, 0, 1.0, 2.0, 4.0, &cfg).unwrap();
    assert!(r.value.abs() < 5e-8);
    // reference from this quadrature with a tightened configuration
    let tight = QuadratureConfig {
        rel_tol: 1e-12,
        ..cfg
    };
    let r = triple_bessel_numeric(1, 1, 2, 1.0, 1.0, 1.0, &tight).unwrap();
    assert!((r.value - 0.490_873_852_123_405).abs() < 1e-7 * 0.49);
    let analytic = triple_bessel_weighted(1, 1, 2, 1.0, 1.0, 1.0).unwrap();
    assert!((r.value - analytic).abs() < 1e-12);
}

#[test]
fn triple_at_band_edge_takes_half_maximum() {
    let cfg = QuadratureConfig::default();
    for (l1, l2, big_l) in [(0, 0, 0), (1, 1, 0), (2, 1, 1), (1, 1, 2)] {
        let numeric = triple_bessel_numeric(l1, l2, big_l, 1.0, 2.0, 3.0, &cfg).unwrap();
        let analytic = triple_bessel_weighted(l1, l2, big_l, 1.0, 2.0, 3.0).unwrap();
        assert!(
            (numeric.value - analytic).abs() <= 1e-9 * analytic.abs(),
            "({l1},{l2},{big_l}): {} vs {analytic}",
            numeric.value
        );
    }
}

#[test]
fn triple_matches_closed_form_inside_band() {
    let cfg = QuadratureConfig::default();
    for (l1, l2, big_l) in [(1, 1, 0), (2, 1, 1), (3, 2, 1), (2, 2, 4)] {
        for big_k in [1.3, 2.0, 2.7] {
            let numeric = triple_bessel_numeric(l1, l2, big_l, 1.0, 2.0, big_k, &cfg).unwrap();
            let analytic = triple_bessel_weighted(l1, l2, big_l, 1.0, 2.0, big_k).unwrap();
            assert!(
                (numeric.value - analytic).abs() <= 1e-9 * analytic.abs().max(1e-3),
                "({l1},{l2},{big_l}) K={big_k}: {} vs {analytic}",
                numeric.value
            );
        }
    }
}
