//! Exact Wigner 3j/6j symbols and half-integer Gamma ratios.
//!
//! Everything in this module is computed over arbitrary-precision rationals.
//! Values that are square roots of rationals are carried as
//! [`SignedSqrtRational`] and only converted to `f64` by the caller.

use std::fmt;
use std::ops::{Div, Mul};
use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

static FACTORIALS: LazyLock<RwLock<Vec<BigInt>>> =
    LazyLock::new(|| RwLock::new(vec![BigInt::one()]));

/// `n!` from a shared, growable table.
pub fn factorial(n: u32) -> BigInt {
    let n = n as usize;
    {
        let table = FACTORIALS.read().expect("factorial table poisoned");
        if let Some(f) = table.get(n) {
            return f.clone();
        }
    }
    let mut table = FACTORIALS.write().expect("factorial table poisoned");
    while table.len() <= n {
        let k = table.len();
        let next = &table[k - 1] * BigInt::from(k);
        table.push(next);
    }
    table[n].clone()
}

fn factorial_i(n: i64) -> BigInt {
    debug_assert!(n >= 0, "negative factorial argument {n}");
    factorial(n as u32)
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// An exact value `s * sqrt(p / q)` with `s` in {-1, 0, +1}.
///
/// The radicand is kept in lowest terms with a positive denominator, and
/// `s == 0` exactly when the radicand is zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational {
    sign: i8,
    radicand: BigRational,
}

impl SignedSqrtRational {
    pub fn zero() -> Self {
        Self {
            sign: 0,
            radicand: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Self {
            sign: 1,
            radicand: BigRational::one(),
        }
    }

    /// `sign * sqrt(radicand)`. The sign is ignored when the radicand is zero.
    ///
    /// # Panics
    /// If `radicand` is negative.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "negative radicand {radicand}");
        if radicand.is_zero() || sign == 0 {
            return Self::zero();
        }
        Self {
            sign: sign.signum(),
            radicand,
        }
    }

    /// Positive square root of a non-negative rational.
    pub fn sqrt(radicand: BigRational) -> Self {
        Self::new(1, radicand)
    }

    /// The value whose square is `|q|` and whose sign is the sign of `q`.
    pub fn from_signed_square(q: BigRational) -> Self {
        let sign = if q.is_positive() {
            1
        } else if q.is_negative() {
            -1
        } else {
            0
        };
        Self::new(sign, q.abs())
    }

    /// An exact rational `q`, i.e. `sign(q) * sqrt(q^2)`.
    pub fn from_rational(q: BigRational) -> Self {
        let sq = &q * &q;
        Self::from_signed_square(if q.is_negative() { -sq } else { sq })
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// `sign * radicand`, the exact square carrying the sign.
    pub fn signed_square(&self) -> BigRational {
        match self.sign {
            0 => BigRational::zero(),
            1 => self.radicand.clone(),
            _ => -self.radicand.clone(),
        }
    }

    /// The square of the value, which is always rational.
    pub fn square(&self) -> BigRational {
        self.radicand.clone()
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let r = ratio_to_f64(&self.radicand);
        f64::from(self.sign) * r.sqrt()
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        Some(Self::new(
            self.sign * rhs.sign,
            &self.radicand / &rhs.radicand,
        ))
    }
}

impl Default for SignedSqrtRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl Mul<&SignedSqrtRational> for &SignedSqrtRational {
    type Output = SignedSqrtRational;

    fn mul(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        if self.is_zero() || rhs.is_zero() {
            return SignedSqrtRational::zero();
        }
        SignedSqrtRational {
            sign: self.sign * rhs.sign,
            radicand: &self.radicand * &rhs.radicand,
        }
    }
}

impl Mul for SignedSqrtRational {
    type Output = SignedSqrtRational;

    fn mul(self, rhs: SignedSqrtRational) -> SignedSqrtRational {
        &self * &rhs
    }
}

impl Div<&SignedSqrtRational> for &SignedSqrtRational {
    type Output = SignedSqrtRational;

    /// # Panics
    /// On division by zero.
    fn div(self, rhs: &SignedSqrtRational) -> SignedSqrtRational {
        self.checked_div(rhs)
            .expect("division by a zero SignedSqrtRational")
    }
}

impl fmt::Display for SignedSqrtRational {
    /// Formats as `+sqrt(p/q)`, `-sqrt(p)` or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return write!(f, "0");
        }
        let s = if self.sign > 0 { '+' } else { '-' };
        if self.radicand.denom().is_one() {
            write!(f, "{s}sqrt({})", self.radicand.numer())
        } else {
            write!(
                f,
                "{s}sqrt({}/{})",
                self.radicand.numer(),
                self.radicand.denom()
            )
        }
    }
}

/// Correctly rounded-ish conversion that survives numerators and
/// denominators beyond the `f64` range.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() && (v != 0.0 || q.is_zero()) {
            return v;
        }
    }
    // Scale both parts down to 64 significant bits before dividing.
    let (n, d) = (q.numer(), q.denom());
    let shift = |x: &BigInt| x.bits().saturating_sub(64);
    let (sn, sd) = (shift(n), shift(d));
    let nf = (n >> sn).to_f64().unwrap_or(f64::NAN);
    let df = (d >> sd).to_f64().unwrap_or(f64::NAN);
    nf / df * 2f64.powi(sn as i32 - sd as i32)
}

fn rational(n: BigInt, d: BigInt) -> BigRational {
    BigRational::new(n, d)
}

/// Parity constraint on the third member of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Any,
}

impl Parity {
    fn admits(self, n: u32) -> bool {
        match self {
            Parity::Even => n.is_multiple_of(2),
            Parity::Odd => n % 2 == 1,
            Parity::Any => true,
        }
    }
}

/// The admissible values of a third angular momentum coupled to two others.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleSelection {
    pub lo: u32,
    pub hi: u32,
    pub parity: Parity,
}

impl TriangleSelection {
    /// `|a - b| <= c <= a + b`, no parity constraint.
    pub fn triangle(a: u32, b: u32) -> Self {
        Self {
            lo: a.abs_diff(b),
            hi: a + b,
            parity: Parity::Any,
        }
    }

    /// `|a - b| <= c <= a + b` with `a + b + c` even, the support of
    /// `(a b c; 0 0 0)`.
    pub fn even_triangle(a: u32, b: u32) -> Self {
        let parity = if (a + b).is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        };
        Self {
            lo: a.abs_diff(b),
            hi: a + b,
            parity,
        }
    }

    pub fn contains(&self, c: u32) -> bool {
        self.lo <= c && c <= self.hi && self.parity.admits(c)
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let parity = match (self.parity, other.parity) {
            (Parity::Any, p) | (p, Parity::Any) => p,
            (p, q) if p == q => p,
            _ => return None,
        };
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi, parity })
    }

    pub fn iter(self) -> impl Iterator<Item = u32> {
        let parity = self.parity;
        (self.lo..=self.hi).filter(move |&c| parity.admits(c))
    }
}

/// `true` when `(a, b, c)` satisfies the triangle inequality.
pub fn is_triangle(a: u32, b: u32, c: u32) -> bool {
    a.abs_diff(b) <= c && c <= a + b
}

/// The 3j symbol `(j1 j2 j3; 0 0 0)`.
///
/// Zero unless the triangle inequality holds and `j1 + j2 + j3` is even. Uses
/// the closed form with `g = (j1 + j2 + j3) / 2`:
///
/// ```text
/// (-1)^g sqrt[(J-2j1)!(J-2j2)!(J-2j3)!/(J+1)!] g!/((g-j1)!(g-j2)!(g-j3)!)
/// ```
pub fn wigner_3j_zero(j1: u32, j2: u32, j3: u32) -> SignedSqrtRational {
    let big_j = j1 + j2 + j3;
    if big_j % 2 == 1 || !is_triangle(j1, j2, j3) {
        return SignedSqrtRational::zero();
    }
    let g = big_j / 2;
    let num = factorial(big_j - 2 * j1) * factorial(big_j - 2 * j2) * factorial(big_j - 2 * j3);
    let delta = rational(num, factorial(big_j + 1));
    let ratio = factorial(g) / (factorial(g - j1) * factorial(g - j2) * factorial(g - j3));
    let radicand = delta * BigRational::from_integer(&ratio * &ratio);
    SignedSqrtRational::new(if g.is_multiple_of(2) { 1 } else { -1 }, radicand)
}

fn triangle_delta_sq(a: u32, b: u32, c: u32) -> BigRational {
    let (a, b, c) = (a as i64, b as i64, c as i64);
    rational(
        factorial_i(a + b - c) * factorial_i(a - b + c) * factorial_i(-a + b + c),
        factorial_i(a + b + c + 1),
    )
}

/// The 6j symbol `{j1 j2 j3; j4 j5 j6}` by the Racah single-sum formula.
pub fn wigner_6j(j1: u32, j2: u32, j3: u32, j4: u32, j5: u32, j6: u32) -> SignedSqrtRational {
    let triads = [(j1, j2, j3), (j1, j5, j6), (j4, j2, j6), (j4, j5, j3)];
    if !triads.iter().all(|&(a, b, c)| is_triangle(a, b, c)) {
        return SignedSqrtRational::zero();
    }
    let delta_sq = triads
        .iter()
        .map(|&(a, b, c)| triangle_delta_sq(a, b, c))
        .fold(BigRational::one(), |acc, d| acc * d);

    let sums = triads.map(|(a, b, c)| (a + b + c) as i64);
    let caps = [
        (j1 + j2 + j4 + j5) as i64,
        (j1 + j3 + j4 + j6) as i64,
        (j2 + j3 + j5 + j6) as i64,
    ];
    let t_min = *sums.iter().max().unwrap();
    let t_max = *caps.iter().min().unwrap();

    let mut racah = BigRational::zero();
    for t in t_min..=t_max {
        let mut den = BigInt::one();
        for s in sums {
            den *= factorial_i(t - s);
        }
        for c in caps {
            den *= factorial_i(c - t);
        }
        let term = rational(factorial_i(t + 1), den);
        if t.is_even() {
            racah += term;
        } else {
            racah -= term;
        }
    }
    let sq = &racah * &racah * delta_sq;
    SignedSqrtRational::from_signed_square(if racah.is_negative() { -sq } else { sq })
}

/// `Gamma(n + 1/2) / sqrt(pi) = (2n)! / (4^n n!)`, exactly.
pub fn gamma_half(n: u32) -> BigRational {
    let four_pow = BigInt::from(4u32).pow(n);
    rational(factorial(2 * n), four_pow * factorial(n))
}

/// Smallest bridge order `L` coupling `(l1, l2)` and `(l3, l4)`.
///
/// `L` must lie in both triangle windows and make both `l1 + l2 + L` and
/// `l3 + l4 + L` even, so that `(l1 l2 L; 000)` and `(l3 l4 L; 000)` are
/// nonzero.
pub fn select_bridge_order(l1: u32, l2: u32, l3: u32, l4: u32) -> Result<u32> {
    let err = Error::NoValidBridge {
        lambda: [l1, l2, l3, l4],
    };
    let window = TriangleSelection::even_triangle(l1, l2)
        .intersect(&TriangleSelection::even_triangle(l3, l4))
        .ok_or_else(|| err.clone())?;
    window.iter().next().ok_or(err)
}
