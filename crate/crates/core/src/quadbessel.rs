//! Closed-form evaluation of
//!
//! ```text
//! I = int_0^inf r^2 j_l1(k1 r) j_l2(k2 r) j_l3(k1 r) j_l4(k2 r) dr
//! ```
//!
//! The four-Bessel integral is split through a bridge order `L` into two
//! triple-Bessel integrals, each a finite sum of 3j/6j symbols and Legendre
//! polynomials in `Delta = (k1^2 + k2^2 - K^2) / (2 k1 k2)`. The remaining
//! integral over `K` is a finite sum of associated Legendre functions of
//! half-integer order.
//!
//! Exact factors (Wigner symbols, square-root binomials, Gamma ratios) are
//! multiplied as rationals and converted to `f64` once per term; terms are
//! accumulated with compensated summation.

use std::f64::consts::PI;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legendre::{
    assoc_legendre_gt1_unnormalized, inverse_gamma_prefactor, legendre_p_unchecked, AssocRoute,
    HalfIntegerOrder, LegendreArgument, MAX_ASSOC_DEGREE, MAX_CLOSED_FORM_DEGREE,
};
use crate::summation::{compensated_sum, CompensatedSum};
use crate::wigner::{
    binomial, gamma_half, select_bridge_order, wigner_3j_zero, wigner_6j, SignedSqrtRational,
    TriangleSelection,
};

/// `|k1 - k2| / max(k1, k2)` below this is treated as `k1 == k2` for bridge
/// orders `L >= 1`.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// The orders and momenta of the integrand
/// `r^2 j_l1(k1 r) j_l2(k2 r) j_l3(k1 r) j_l4(k2 r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralSpec {
    pub lambda: [u32; 4],
    pub k1: f64,
    pub k2: f64,
}

impl IntegralSpec {
    pub fn new(lambda: [u32; 4], k1: f64, k2: f64) -> Result<Self> {
        check_momentum("k1", k1)?;
        check_momentum("k2", k2)?;
        Ok(Self { lambda, k1, k2 })
    }

    /// `true` when `|k1 - k2| / max(k1, k2)` is below [`DEGENERACY_THRESHOLD`].
    pub fn is_degenerate(&self) -> bool {
        momenta_degenerate(self.k1, self.k2)
    }
}

fn check_momentum(name: &str, k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "{name} must be positive and finite, got {k}"
        )))
    }
}

fn momenta_degenerate(k1: f64, k2: f64) -> bool {
    (k1 - k2).abs() / k1.max(k2) < DEGENERACY_THRESHOLD
}

/// How a reported value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// The general bridge-order sum.
    Analytic,
    /// The compact sum for `l2 = l1`, `l4 = l3`.
    Paired,
    /// Numerical quadrature.
    Oracle,
}

/// One addend of the reported value. The bridge indices are absent for the
/// paired formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    #[serde(rename = "calL", default, skip_serializing_if = "Option::is_none")]
    pub cal_l: Option<u32>,
    #[serde(rename = "calLp", default, skip_serializing_if = "Option::is_none")]
    pub cal_lp: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp: Option<u32>,
    pub mu: u32,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub value: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub lambda: [u32; 4],
    pub k1: f64,
    pub k2: f64,
    #[serde(rename = "L")]
    pub bridge_l: Option<u32>,
    pub value: f64,
    pub method: Method,
    pub terms: Vec<Term>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<f64>,
}

impl EvaluationReport {
    /// Compensated re-summation of the stored terms.
    pub fn recomputed_sum(&self) -> f64 {
        compensated_sum(self.terms.iter().map(|t| t.value))
    }

    /// Attach an oracle result and the relative discrepancy against it.
    pub fn with_oracle(mut self, oracle: OracleSummary) -> Self {
        let scale = oracle.value.abs().max(f64::MIN_POSITIVE);
        self.discrepancy = Some((self.value - oracle.value).abs() / scale);
        self.oracle = Some(oracle);
        self
    }
}

fn phase(exponent_half: u32) -> i8 {
    if exponent_half.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// The exact part of one `(cal, l)` term of the triple-Bessel sum:
///
/// ```text
/// C(2L, 2cal)^(1/2) (2l+1) (la L-cal l; 000) (lb cal l; 000)
///     {la lb L; cal L-cal l} / (la lb L; 000)
/// ```
fn bridge_coefficient(la: u32, lb: u32, big_l: u32, cal: u32, l: u32) -> SignedSqrtRational {
    let head = wigner_3j_zero(la, lb, big_l);
    let body = [
        SignedSqrtRational::sqrt(BigRational::from_integer(binomial(2 * big_l, 2 * cal))),
        SignedSqrtRational::from_integer(2 * l as i64 + 1),
        wigner_3j_zero(la, big_l - cal, l),
        wigner_3j_zero(lb, cal, l),
        wigner_6j(la, lb, big_l, cal, big_l - cal, l),
    ]
    .iter()
    .fold(SignedSqrtRational::one(), |acc, f| &acc * f);
    &body / &head
}

/// Values of `l` with a nonzero `(la L-cal l; 000)(lb cal l; 000)`.
fn bridge_l_range(la: u32, lb: u32, big_l: u32, cal: u32) -> Option<TriangleSelection> {
    TriangleSelection::even_triangle(la, big_l - cal)
        .intersect(&TriangleSelection::even_triangle(lb, cal))
}

/// `int_0^inf r^2 j_l1(k1 r) j_l2(k2 r) j_L(K r) dr` in closed form.
///
/// Vanishes identically (`0.0`, not merely small) outside the band
/// `|k1 - k2| <= K <= k1 + k2`; on its edges the half-maximum step gives a
/// factor 1/2.
pub fn triple_bessel_weighted(
    l1: u32,
    l2: u32,
    big_l: u32,
    k1: f64,
    k2: f64,
    big_k: f64,
) -> Result<f64> {
    check_momentum("k1", k1)?;
    check_momentum("k2", k2)?;
    check_momentum("K", big_k)?;
    if wigner_3j_zero(l1, l2, big_l).is_zero() {
        return Err(Error::PrefactorZero {
            j1: l1,
            j2: l2,
            j3: big_l,
        });
    }
    let delta = (k1 * k1 + k2 * k2 - big_k * big_k) / (2.0 * k1 * k2);
    if delta.abs() > 1.0 {
        return Ok(0.0);
    }
    let step = if delta.abs() == 1.0 { 0.5 } else { 1.0 };

    let root = SignedSqrtRational::sqrt(int(2 * big_l as i64 + 1));
    let mut sum = CompensatedSum::new();
    for cal in 0..=big_l {
        let Some(range) = bridge_l_range(l1, l2, big_l, cal) else {
            continue;
        };
        let momenta =
            k1.powi((big_l - cal) as i32) * k2.powi(cal as i32) / big_k.powi(big_l as i32);
        for l in range.iter() {
            let exact = &root * &bridge_coefficient(l1, l2, big_l, cal, l);
            if exact.is_zero() {
                continue;
            }
            sum.add(exact.to_f64() * momenta * legendre_p_unchecked(l, delta));
        }
    }
    let sign = f64::from(phase((l1 + l2 - big_l) / 2));
    Ok(PI * step / (4.0 * k1 * k2 * big_k) * sign * sum.value())
}

/// Degree of the associated Legendre function carried by the bridge order
/// `L`: `P_{-L} = P_{L-1}`, with `P_{-1} = P_0` at `L = 0`.
fn legendre_degree(big_l: u32) -> u32 {
    big_l.saturating_sub(1)
}

/// Exact `(2mu+1) (l lp mu; 000)^2 Gamma(L+mu+1/2) / (Gamma(L+1/2) Gamma(d+mu+3/2))`
/// times `sqrt(pi)`, with `d` the Legendre degree; every `sqrt(pi)` cancels.
fn mu_coefficient(l: u32, lp: u32, big_l: u32, mu: u32) -> BigRational {
    let degree = legendre_degree(big_l);
    let inv_gamma = inverse_gamma_prefactor(degree, HalfIntegerOrder::from_mu(mu));
    debug_assert!(inv_gamma.inv_sqrt_pi);
    let weight = int(2 * mu as i64 + 1) * wigner_3j_zero(l, lp, mu).square();
    weight * gamma_half(big_l + mu) / gamma_half(big_l) * inv_gamma.rational
}

fn assoc_route(degree: u32) -> Result<AssocRoute> {
    if degree > MAX_ASSOC_DEGREE {
        return Err(Error::domain(format!(
            "bridge order needs Legendre degree {degree}, above supported maximum {MAX_ASSOC_DEGREE}"
        )));
    }
    Ok(if degree <= MAX_CLOSED_FORM_DEGREE {
        AssocRoute::ClosedForm
    } else {
        AssocRoute::General
    })
}

/// `(mu, exact coefficient, floating factor)` for each term of the `K`
/// integral, so that `J = sum exact * floating`.
fn j_mu_parts(
    l: u32,
    lp: u32,
    big_l: u32,
    k1: f64,
    k2: f64,
) -> Result<Vec<(u32, BigRational, f64)>> {
    check_momentum("k1", k1)?;
    check_momentum("k2", k2)?;
    if big_l >= 1 && momenta_degenerate(k1, k2) {
        return Err(Error::DegenerateMomenta {
            k1,
            k2,
            bridge: big_l,
        });
    }
    let degree = legendre_degree(big_l);
    let route = assoc_route(degree)?;
    let (k_lo, k_hi) = (k1.min(k2), k1.max(k2));
    // |k1^2 - k2^2| without cancellation
    let gap = (k_hi - k_lo) * (k_hi + k_lo);
    let x = (k1 * k1 + k2 * k2) / gap;
    // (x + 1) / (x - 1) = (k_hi / k_lo)^2
    let arg = LegendreArgument::outside_with_log_ratio(x, 2.0 * (k_hi / k_lo).ln())?;
    let scale = (k1 * k2).sqrt() / gap.powi(big_l as i32);

    TriangleSelection::even_triangle(l, lp)
        .iter()
        .map(|mu| {
            let m = HalfIntegerOrder::from_mu(mu);
            let legendre = assoc_legendre_gt1_unnormalized(degree, m, &arg, route)?;
            Ok((mu, mu_coefficient(l, lp, big_l, mu), scale * legendre))
        })
        .collect()
}

/// `J(k1, k2, k1, k2; l, lp, L) = int beta(Delta) P_l(Delta) P_lp(Delta) / K^(2L) dK`
/// as a finite sum of associated Legendre functions of half-integer order.
///
/// Fails with [`Error::DegenerateMomenta`] for `L >= 1` when `k1` and `k2`
/// are closer than [`DEGENERACY_THRESHOLD`] (relative): the integral
/// diverges at `k1 = k2` and the sum loses all precision near it.
pub fn j_special(l: u32, lp: u32, big_l: u32, k1: f64, k2: f64) -> Result<f64> {
    let parts = j_mu_parts(l, lp, big_l, k1, k2)?;
    Ok(compensated_sum(parts.iter().map(|(_, exact, float)| {
        crate::wigner::ratio_to_f64(exact) * float
    })))
}

/// `int_{-1}^{1} P_l(t) P_lp(t) / (y - t)^(L + 1/2) dt` for `y > 1`.
pub fn legendre_ratio_integral(l: u32, lp: u32, big_l: u32, y: f64) -> Result<f64> {
    if !(y > 1.0) || !y.is_finite() {
        return Err(Error::domain(format!(
            "legendre_ratio_integral needs y > 1, got {y}"
        )));
    }
    let degree = legendre_degree(big_l);
    let route = assoc_route(degree)?;
    let root = ((y - 1.0) * (y + 1.0)).sqrt();
    let z = y / root;
    // (z + 1) / (z - 1) = (y + sqrt(y^2 - 1))^2
    let arg = LegendreArgument::outside_with_log_ratio(z, 2.0 * ((y - 1.0) + root).ln_1p())?;
    let scale = std::f64::consts::SQRT_2 * root.powi(-(big_l as i32));
    let mut sum = CompensatedSum::new();
    for mu in TriangleSelection::even_triangle(l, lp).iter() {
        let m = HalfIntegerOrder::from_mu(mu);
        let legendre = assoc_legendre_gt1_unnormalized(degree, m, &arg, route)?;
        sum.add(crate::wigner::ratio_to_f64(&mu_coefficient(l, lp, big_l, mu)) * legendre);
    }
    Ok(scale * sum.value())
}

/// The general bridge-order evaluation of the four-Bessel integral.
pub fn quad_bessel_analytic(spec: &IntegralSpec) -> Result<EvaluationReport> {
    let IntegralSpec { lambda, k1, k2 } = *spec;
    check_momentum("k1", k1)?;
    check_momentum("k2", k2)?;
    let [l1, l2, l3, l4] = lambda;
    let big_l = select_bridge_order(l1, l2, l3, l4)?;
    if big_l >= 1 && momenta_degenerate(k1, k2) {
        return Err(Error::DegenerateMomenta {
            k1,
            k2,
            bridge: big_l,
        });
    }

    // i^(sum - 2L) is real: the exponent is even once L passed the parity check.
    let sign = f64::from(phase((l1 + l2 + l3 + l4 - 2 * big_l) / 2));
    let prefactor = sign * PI * k1.powi(2 * big_l as i32 - 2) / (8.0 * k2 * k2);
    let two_l_plus_one = SignedSqrtRational::from_integer(2 * big_l as i64 + 1);

    let mut terms = Vec::new();
    for cal in 0..=big_l {
        let Some(range) = bridge_l_range(l1, l2, big_l, cal) else {
            continue;
        };
        for cal_p in 0..=big_l {
            let Some(range_p) = bridge_l_range(l3, l4, big_l, cal_p) else {
                continue;
            };
            let momenta = prefactor * (k2 / k1).powi((cal + cal_p) as i32);
            for l in range.iter() {
                let left = &two_l_plus_one * &bridge_coefficient(l1, l2, big_l, cal, l);
                if left.is_zero() {
                    continue;
                }
                for lp in range_p.iter() {
                    let outer = &left * &bridge_coefficient(l3, l4, big_l, cal_p, lp);
                    if outer.is_zero() {
                        continue;
                    }
                    for (mu, exact, float) in j_mu_parts(l, lp, big_l, k1, k2)? {
                        if exact.is_zero() {
                            continue;
                        }
                        let coeff = &outer * &SignedSqrtRational::from_rational(exact);
                        terms.push(Term {
                            cal_l: Some(cal),
                            cal_lp: Some(cal_p),
                            l: Some(l),
                            lp: Some(lp),
                            mu,
                            value: coeff.to_f64() * momenta * float,
                        });
                    }
                }
            }
        }
    }
    let value = compensated_sum(terms.iter().map(|t| t.value));
    Ok(EvaluationReport {
        lambda,
        k1,
        k2,
        bridge_l: Some(big_l),
        value,
        method: Method::Analytic,
        terms,
        oracle: None,
        discrepancy: None,
    })
}

/// The compact result for `lambda = (l1, l1, l2, l2)`:
/// `(pi/4) sum_mu (l1 l2 mu; 000)^2 k_<^(mu-1) / k_>^(mu+2)`.
///
/// Valid at `k1 == k2`.
pub fn quad_bessel_paired(l1: u32, l2: u32, k1: f64, k2: f64) -> Result<EvaluationReport> {
    check_momentum("k1", k1)?;
    check_momentum("k2", k2)?;
    let (k_lo, k_hi) = (k1.min(k2), k1.max(k2));
    let terms: Vec<Term> = TriangleSelection::even_triangle(l1, l2)
        .iter()
        .map(|mu| {
            let weight = crate::wigner::ratio_to_f64(&wigner_3j_zero(l1, l2, mu).square());
            let momenta = (k_lo / k_hi).powi(mu as i32) / (k_lo * k_hi * k_hi);
            Term {
                cal_l: None,
                cal_lp: None,
                l: None,
                lp: None,
                mu,
                value: PI / 4.0 * weight * momenta,
            }
        })
        .collect();
    let value = compensated_sum(terms.iter().map(|t| t.value));
    Ok(EvaluationReport {
        lambda: [l1, l1, l2, l2],
        k1,
        k2,
        bridge_l: Some(0),
        value,
        method: Method::Paired,
        terms,
        oracle: None,
        discrepancy: None,
    })
}

/// Formula selection for [`evaluate_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Formula {
    /// Paired formula whenever a swap of like-momentum orders makes the
    /// spec paired, the general sum otherwise.
    #[default]
    Auto,
    General,
    Paired,
}

/// The paired orders `(l1, l2)` reachable from `lambda` by swapping
/// `lambda2 <-> lambda4` (the integrand is symmetric under it).
pub fn paired_orders(lambda: [u32; 4]) -> Option<(u32, u32)> {
    let [l1, l2, l3, l4] = lambda;
    ((l1 == l2 && l3 == l4) || (l1 == l4 && l2 == l3)).then_some((l1, l3))
}

pub fn evaluate_with(spec: &IntegralSpec, formula: Formula) -> Result<EvaluationReport> {
    let paired = paired_orders(spec.lambda);
    let use_paired = match formula {
        Formula::General => false,
        Formula::Auto => paired.is_some(),
        Formula::Paired => {
            if paired.is_none() {
                return Err(Error::domain(format!(
                    "lambda = {:?} is not a paired set",
                    spec.lambda
                )));
            }
            true
        }
    };
    match (use_paired, paired) {
        (true, Some((a, b))) => {
            let mut report = quad_bessel_paired(a, b, spec.k1, spec.k2)?;
            report.lambda = spec.lambda;
            Ok(report)
        }
        _ => quad_bessel_analytic(spec),
    }
}

/// Analytic value of the four-Bessel integral.
pub fn evaluate(spec: &IntegralSpec) -> Result<EvaluationReport> {
    evaluate_with(spec, Formula::Auto)
}
