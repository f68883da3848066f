//! Independent numerical evaluation of radial Bessel-product integrals.
//!
//! The finite range `[0, R]` is covered by Gauss-Legendre panels a fraction
//! of the fastest oscillation period wide. The remainder `[R, inf)` is
//! integrated exactly: each `j_n(kr)` is a finite sum of `e^{±ikr} / r^s`, so
//! the tail is a finite sum of generalized exponential integrals
//! `E_p(-i omega R)`. Convergence is judged by doubling `R` and comparing.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, LazyLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadbessel::IntegralSpec;
use crate::summation::CompensatedSum;

const GAUSS_NODES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Relative change between successive radii accepted as converged.
    pub rel_tol: f64,
    /// Largest radius the finite part may reach; `4000 / min(k)` when unset.
    pub max_radius: Option<f64>,
    /// Panels per period of the fastest oscillation in the integrand.
    pub panels_per_period: u32,
    /// Number of radius doublings tried (at least one is always made).
    pub acceleration_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            max_radius: None,
            panels_per_period: 4,
            acceleration_depth: 6,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::domain(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if let Some(r) = self.max_radius {
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::domain(format!(
                    "max_radius must be positive, got {r}"
                )));
            }
        }
        if self.panels_per_period < 2 {
            return Err(Error::domain(format!(
                "panels_per_period must be at least 2, got {}",
                self.panels_per_period
            )));
        }
        Ok(())
    }

    pub fn effective_max_radius(&self, k_min: f64) -> f64 {
        self.max_radius.unwrap_or(4000.0 / k_min)
    }
}

/// A quadrature value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub value: f64,
    pub error_estimate: f64,
}

/// Spherical Bessel function of the first kind, `x >= 0`.
pub fn spherical_bessel_j(n: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "spherical_bessel_j needs finite x >= 0, got {x}"
        )));
    }
    Ok(sph_j(n, x))
}

fn sph_j(n: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let nf = f64::from(n);
    if x * x <= (nf + 1.5).max(1.0) {
        series_j(n, x)
    } else if x < nf {
        miller_j(n, x)
    } else {
        upward_j(n, x)
    }
}

/// Power series; every term ratio is at most 1/4 in the region it is used.
fn series_j(n: u32, x: f64) -> f64 {
    // x^n / (2n+1)!! without overflow
    let lead = (0..n).fold(1.0, |v, i| v * x / f64::from(2 * i + 1)) / f64::from(2 * n + 1);
    let half_sq = -0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200u32 {
        term *= half_sq / (f64::from(k) * f64::from(2 * n + 2 * k + 1));
        sum += term;
        if term.abs() <= f64::EPSILON * sum.abs() {
            break;
        }
    }
    lead * sum
}

fn j0_j1(x: f64) -> (f64, f64) {
    let (s, c) = x.sin_cos();
    (s / x, s / (x * x) - c / x)
}

fn upward_j(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = j0_j1(x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = f64::from(2 * k + 1) / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Downward recurrence from well above `n`, normalized against the larger
/// of `j_0` and `j_1`.
fn miller_j(n: u32, x: f64) -> f64 {
    let start = n + 20 + (40.0 * f64::from(n)).sqrt().ceil() as u32;
    let (mut upper, mut cur) = (0.0_f64, 1e-300_f64);
    let (mut at_n, mut at_1) = (0.0, 0.0);
    for k in (1..=start).rev() {
        let lower = f64::from(2 * k + 1) / x * cur - upper;
        upper = cur;
        cur = lower;
        // cur = f_{k-1}, upper = f_k
        if k == n {
            at_n = upper;
        }
        if k == 1 {
            at_1 = upper;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            upper *= 1e-250;
            at_n *= 1e-250;
            at_1 *= 1e-250;
        }
    }
    let at_0 = cur;
    if n == 0 {
        at_n = at_0;
    }
    let (j0, j1) = j0_j1(x);
    if j0.abs() >= j1.abs() {
        at_n * (j0 / at_0)
    } else {
        at_n * (j1 / at_1)
    }
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

static RULES: LazyLock<RwLock<HashMap<usize, Rule>>> = LazyLock::new(Default::default);

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre_rule(n: usize) -> Rule {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    if let Some(rule) = RULES.read().expect("rule cache poisoned").get(&n) {
        return Arc::clone(rule);
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut deriv = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * z * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { z } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            deriv = nf * (z * pn - pm) / (z * z - 1.0);
            let dz = pn / deriv;
            z -= dz;
            if dz.abs() <= 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * deriv * deriv);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    let rule = Arc::new((nodes, weights));
    RULES
        .write()
        .expect("rule cache poisoned")
        .entry(n)
        .or_insert(rule)
        .clone()
}

/// `n`-point Gauss-Legendre quadrature of `f` over `[a, b]`.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre_rule(n);
    let (half, mid) = (0.5 * (b - a), 0.5 * (b + a));
    let mut sum = CompensatedSum::new();
    for (x, w) in rule.0.iter().zip(&rule.1) {
        sum.add(w * f(mid + half * x));
    }
    half * sum.value()
}

/// `E_p(z) = int_1^inf e^{-zt} / t^p dt` for integer `p >= 1`, `Re z >= 0`,
/// `z != 0`.
pub fn expint(p: u32, z: Complex64) -> Complex64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    const TINY: f64 = 1e-300;
    let one = Complex64::new(1.0, 0.0);
    let nm1 = p as i64 - 1;
    if z.norm() >= 1.0 {
        // modified Lentz evaluation of the continued fraction
        let pf = f64::from(p);
        let mut b = z + pf;
        let mut c = Complex64::new(1.0 / TINY, 0.0);
        let mut d = one / b;
        let mut h = d;
        for i in 1..100_000 {
            let fi = i as f64;
            let an = -fi * (pf - 1.0 + fi);
            b += 2.0;
            d = one / (d * an + b);
            c = b + c.inv() * an;
            let del = c * d;
            h *= del;
            if (del - one).norm() <= 1e-16 {
                break;
            }
        }
        h * (-z).exp()
    } else {
        let mut ans = if nm1 != 0 {
            Complex64::new(1.0 / nm1 as f64, 0.0)
        } else {
            -z.ln() - EULER
        };
        let mut fact = one;
        for i in 1..10_000_i64 {
            fact *= -z / i as f64;
            let del = if i != nm1 {
                -fact / (i - nm1) as f64
            } else {
                let psi = -EULER + (1..=nm1).map(|k| 1.0 / k as f64).sum::<f64>();
                fact * (-z.ln() + psi)
            };
            ans += del;
            if del.norm() <= ans.norm() * 1e-17 {
                break;
            }
        }
        ans
    }
}

/// `r^weight prod_i j_{n_i}(k_i r)`, with the large-`r` form
/// `Re sum_terms e^{i omega r} sum_p c_p r^{-p}` kept for the tail.
struct RadialProduct {
    orders: Vec<u32>,
    waves: Vec<f64>,
    weight: i32,
    /// `(omega, coefficient by inverse power)`.
    tail: Vec<(f64, Vec<Complex64>)>,
}

impl RadialProduct {
    fn new(orders: &[u32], waves: &[f64], weight: i32) -> Self {
        let mut unique: Vec<f64> = Vec::new();
        let slots: Vec<usize> = waves
            .iter()
            .map(|&k| match unique.iter().position(|&u| u == k) {
                Some(i) => i,
                None => {
                    unique.push(k);
                    unique.len() - 1
                }
            })
            .collect();

        // j_n(kr) = Re[(-i)^{n+1} e^{ikr} sum_s i^s a_s(n) / (kr)^{s+1}]
        //         = (h + conj(h)) / 2
        let factors: Vec<Vec<Complex64>> = orders
            .iter()
            .zip(waves)
            .map(|(&n, &k)| {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); n as usize + 2];
                let lead = Complex64::new(0.0, -1.0).powu(n + 1);
                let mut a = 1.0;
                for s in 0..=n {
                    if s > 0 {
                        // a_s = a_{s-1} (n+s)(n-s+1) / (2s)
                        a *= f64::from((n + s) * (n - s + 1)) / f64::from(2 * s);
                    }
                    coeffs[s as usize + 1] =
                        lead * Complex64::new(0.0, 1.0).powu(s) * a / k.powi(s as i32 + 1);
                }
                coeffs
            })
            .collect();

        let mut merged: HashMap<Vec<i32>, Vec<Complex64>> = HashMap::new();
        let count = orders.len();
        let scale = 0.5_f64.powi(count as i32);
        for signs in 0..(1u32 << count) {
            let mut key = vec![0i32; unique.len()];
            let mut poly = vec![Complex64::new(scale, 0.0)];
            for (i, factor) in factors.iter().enumerate() {
                let conj = signs & (1 << i) != 0;
                key[slots[i]] += if conj { -1 } else { 1 };
                let f: Vec<Complex64> = if conj {
                    factor.iter().map(|c| c.conj()).collect()
                } else {
                    factor.clone()
                };
                let mut out = vec![Complex64::new(0.0, 0.0); poly.len() + f.len() - 1];
                for (a, pa) in poly.iter().enumerate() {
                    for (b, fb) in f.iter().enumerate() {
                        out[a + b] += pa * fb;
                    }
                }
                poly = out;
            }
            let slot = merged
                .entry(key)
                .or_insert_with(|| vec![Complex64::new(0.0, 0.0); poly.len()]);
            for (dst, src) in slot.iter_mut().zip(&poly) {
                *dst += src;
            }
        }
        // fold in r^weight: r^{-p} becomes r^{-(p - weight)}; keys whose
        // frequencies coincide (e.g. K = k1 + k2) are merged
        let mut by_omega: Vec<(f64, Vec<Complex64>)> = Vec::new();
        for (key, poly) in merged {
            let omega: f64 = key
                .iter()
                .zip(&unique)
                .map(|(&c, &k)| f64::from(c) * k)
                .sum();
            let omega = if key.iter().all(|&c| c == 0) {
                0.0
            } else {
                omega
            };
            let slot = match by_omega.iter().position(|(w, _)| *w == omega) {
                Some(i) => &mut by_omega[i].1,
                None => {
                    by_omega.push((omega, Vec::new()));
                    &mut by_omega.last_mut().expect("just pushed").1
                }
            };
            for (p, c) in poly.into_iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                let q = p as i32 - weight;
                assert!(q >= 1, "tail term r^{} does not decay", -q);
                if slot.len() <= q as usize {
                    slot.resize(q as usize + 1, Complex64::new(0.0, 0.0));
                }
                slot[q as usize] += c;
            }
        }
        // A non-oscillating 1/r term would make the integral diverge; when the
        // integral converges it cancels up to rounding.
        let slow: f64 = by_omega
            .iter()
            .filter_map(|(_, c)| c.get(1))
            .map(|c| c.norm())
            .sum();
        for (omega, coeffs) in &mut by_omega {
            if *omega == 0.0 {
                if let Some(c) = coeffs.get_mut(1) {
                    if c.re.abs() <= 64.0 * f64::EPSILON * slow {
                        *c = Complex64::new(0.0, 0.0);
                    }
                }
            }
        }
        let tail = by_omega;

        Self {
            orders: orders.to_vec(),
            waves: waves.to_vec(),
            weight,
            tail,
        }
    }

    fn eval(&self, r: f64) -> f64 {
        self.orders
            .iter()
            .zip(&self.waves)
            .fold(r.powi(self.weight), |acc, (&n, &k)| acc * sph_j(n, k * r))
    }

    /// `int_R^inf` of the integrand.
    fn tail_integral(&self, radius: f64) -> Result<f64> {
        let mut sum = CompensatedSum::new();
        for (omega, coeffs) in &self.tail {
            for (p, c) in coeffs.iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                let p = p as u32;
                let base = radius.powi(1 - p as i32);
                let integral = if *omega == 0.0 {
                    if p < 2 {
                        return Err(Error::NoConvergence {
                            estimate: f64::INFINITY,
                            tolerance: 0.0,
                        });
                    }
                    Complex64::new(base / f64::from(p - 1), 0.0)
                } else {
                    // int_R^inf r^{-p} e^{i omega r} dr = R^{1-p} E_p(-i omega R)
                    expint(p, Complex64::new(0.0, -omega * radius)) * base
                };
                sum.add((c * integral).re);
            }
        }
        Ok(sum.value())
    }

    /// Panel quadrature over `[a, b]`; returns the integral and the integral
    /// of the absolute value.
    fn panels(&self, a: f64, b: f64, width: f64) -> (f64, f64) {
        let count = ((b - a) / width).ceil().max(1.0) as usize;
        let h = (b - a) / count as f64;
        let rule = gauss_legendre_rule(GAUSS_NODES);
        let mut sum = CompensatedSum::new();
        let mut abs = 0.0;
        for i in 0..count {
            let lo = a + i as f64 * h;
            let mid = lo + 0.5 * h;
            for (x, w) in rule.0.iter().zip(&rule.1) {
                let v = w * 0.5 * h * self.eval(mid + 0.5 * h * x);
                sum.add(v);
                abs += v.abs();
            }
        }
        (sum.value(), abs)
    }
}

fn radial_product_integral(
    orders: &[u32],
    waves: &[f64],
    weight: i32,
    config: &QuadratureConfig,
    depth: u32,
) -> Result<OracleResult> {
    config.validate()?;
    let product = RadialProduct::new(orders, waves, weight);
    let k_min = waves.iter().cloned().fold(f64::INFINITY, f64::min);
    let n_max = orders.iter().copied().max().unwrap_or(0);
    let omega_max: f64 = waves.iter().sum();
    let max_radius = config.effective_max_radius(k_min);
    let width = 2.0 * PI / omega_max / f64::from(config.panels_per_period);

    let mut radius = ((16.0 + 2.0 * f64::from((n_max + 1) * (n_max + 1))) / k_min).min(max_radius);
    let (inner, mut abs) = product.panels(0.0, radius, width);
    // a second, incommensurate panel grid bounds the discretization error
    let (inner_check, _) = product.panels(0.0, radius, width * 2.0 / 3.0);
    let grid_error = (inner - inner_check).abs();

    let mut finite = CompensatedSum::new();
    finite.add(inner);
    let mut previous = finite.value() + product.tail_integral(radius)?;
    let mut last_diff = f64::INFINITY;
    for _ in 0..depth.max(1) {
        let next = (2.0 * radius).min(max_radius);
        if next <= radius {
            break;
        }
        let (piece, piece_abs) = product.panels(radius, next, width);
        finite.add(piece);
        abs += piece_abs;
        radius = next;
        let current = finite.value() + product.tail_integral(radius)?;
        let floor = 64.0 * f64::EPSILON * abs;
        last_diff = (current - previous).abs();
        let error_estimate = last_diff.max(grid_error).max(floor);
        if error_estimate <= config.rel_tol * current.abs() + floor {
            return Ok(OracleResult {
                value: current,
                error_estimate,
            });
        }
        previous = current;
    }
    Err(Error::NoConvergence {
        estimate: last_diff.max(grid_error),
        tolerance: config.rel_tol * previous.abs(),
    })
}

/// Numerical value of the four-Bessel integral described by `spec`.
pub fn quad_bessel_numeric(spec: &IntegralSpec, config: &QuadratureConfig) -> Result<OracleResult> {
    let [l1, l2, l3, l4] = spec.lambda;
    radial_product_integral(
        &[l1, l2, l3, l4],
        &[spec.k1, spec.k2, spec.k1, spec.k2],
        2,
        config,
        config.acceleration_depth,
    )
}

/// Numerical value of `int_0^inf r^2 j_l1(k1 r) j_l2(k2 r) j_L(K r) dr`.
///
/// Uses twice the configured refinement depth. Near the band edges
/// `K = |k1 - k2|` and `K = k1 + k2` the integrand decays only like `1/r`
/// and convergence is slow.
pub fn triple_bessel_numeric(
    l1: u32,
    l2: u32,
    big_l: u32,
    k1: f64,
    k2: f64,
    big_k: f64,
    config: &QuadratureConfig,
) -> Result<OracleResult> {
    for (name, k) in [("k1", k1), ("k2", k2), ("K", big_k)] {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::domain(format!(
                "{name} must be positive and finite, got {k}"
            )));
        }
    }
    radial_product_integral(
        &[l1, l2, big_l],
        &[k1, k2, big_k],
        2,
        config,
        2 * config.acceleration_depth,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values() {
        assert_eq!(spherical_bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(spherical_bessel_j(3, 0.0).unwrap(), 0.0);
        assert!(spherical_bessel_j(1, -1.0).is_err());
        assert!((spherical_bessel_j(2, 1.0).unwrap() - 0.062_035_052_011_373_86).abs() < 1e-15);
        // golden values from an arbitrary-precision library
        let golden = [
            (0, 10.0, -0.054_402_111_088_936_98),
            (3, 0.5, 0.001_174_035_443_867_557),
            (5, 3.0, 0.016_397_480_955_999_1),
            (10, 5.0, 0.000_407_344_244_249_460_4),
            (10, 12.0, 0.106_622_530_565_504_84),
            (4, 40.0, 0.013_963_677_349_179_317),
        ];
        for (n, x, want) in golden {
            let got = spherical_bessel_j(n, x).unwrap();
            assert!(
                (got - want).abs() <= 1e-13 * want.abs(),
                "j_{n}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn bessel_recurrence() {
        for n in 1..=10u32 {
            for i in 1..=500 {
                let x = 0.1 * f64::from(i);
                let (a, b, c) = (
                    sph_j(n - 1, x),
                    sph_j(n + 1, x),
                    sph_j(n, x) * f64::from(2 * n + 1) / x,
                );
                let scale = a.abs().max(b.abs()).max(c.abs());
                assert!((a + b - c).abs() <= 1e-12 * scale, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let v = gauss_legendre(|x| x.powi(19) + x.powi(18), -1.0, 1.0, 10);
        assert!((v - 2.0 / 19.0).abs() < 1e-15);
        let v = gauss_legendre(f64::exp, 0.0, 1.0, 12);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-15);
        let rule = gauss_legendre_rule(7);
        assert!((rule.1.iter().sum::<f64>() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn expint_values() {
        // E_1(1) and E_2(0.5), real arguments
        assert!((expint(1, Complex64::new(1.0, 0.0)).re - 0.219_383_934_395_520_3).abs() < 1e-15);
        assert!((expint(2, Complex64::new(0.5, 0.0)).re - 0.326_643_862_324_553).abs() < 1e-14);
        // E_2(-i) = e^{i} - i E_1(-i) on the imaginary axis
        let z = Complex64::new(0.0, -1.0);
        let lhs = expint(2, z);
        let rhs = (-z).exp() - z * expint(1, z);
        assert!((lhs - rhs).norm() < 1e-14);
        let z = Complex64::new(0.0, 3.0);
        assert!((expint(3, z) * 2.0 - ((-z).exp() - z * expint(2, z))).norm() < 1e-14);
    }

    #[test]
    fn oracle_matches_elementary_values() {
        let cfg = QuadratureConfig::default();
        let spec = IntegralSpec::new([0; 4], 1.0, 2.0).unwrap();
        let r = quad_bessel_numeric(&spec, &cfg).unwrap();
        assert!((r.value - PI / 16.0).abs() < 1e-10, "{r:?}");
        assert!(r.error_estimate < 1e-8);
        let spec = IntegralSpec::new([0; 4], 1.0, 1.0).unwrap();
        let r = quad_bessel_numeric(&spec, &cfg).unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn triple_oracle_inside_and_outside_band() {
        let cfg = QuadratureConfig::default();
        let r = triple_bessel_numeric(0, 0, 0, 1.0, 2.0, 2.0, &cfg).unwrap();
        assert!((r.value - PI / 16.0).abs() < 1e-9, "{r:?}");
        let r = triple_bessel_numeric(0, 0, 0, 1.0, 1.0, 3.0, &cfg).unwrap();
        assert!(r.value.abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn config_validation() {
        let cfg = QuadratureConfig {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = QuadratureConfig {
            panels_per_period: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn exhausted_radius_reports_no_convergence() {
        let cfg = QuadratureConfig {
            rel_tol: 1e-15,
            max_radius: Some(30.0),
            ..Default::default()
        };
        let spec = IntegralSpec::new([1, 0, 1, 2], 1.0, 2.0).unwrap();
        assert!(matches!(
            quad_bessel_numeric(&spec, &cfg),
            Err(Error::NoConvergence { .. })
        ));
    }
}
