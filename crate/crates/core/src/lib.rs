//! Analytic evaluation of integrals of four spherical Bessel functions,
//!
//! ```text
//! int_0^inf r^2 j_l1(k1 r) j_l2(k2 r) j_l3(k1 r) j_l4(k2 r) dr,
//! ```
//!
//! as finite sums of Wigner symbols and associated Legendre functions of
//! half-integer order, with a quadrature oracle for cross-checks.

// negated float comparisons are how NaN fails the domain checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod legendre;
pub mod oracle;
pub mod quadbessel;
pub mod summation;
pub mod wigner;

pub use error::{Error, Result};
pub use legendre::{
    assoc_legendre_gt1, legendre_linearization_coeffs, legendre_p, HalfIntegerOrder,
};
pub use oracle::{
    quad_bessel_numeric, spherical_bessel_j, triple_bessel_numeric, OracleResult, QuadratureConfig,
};
pub use quadbessel::{
    evaluate, evaluate_with, j_special, legendre_ratio_integral, quad_bessel_analytic,
    quad_bessel_paired, triple_bessel_weighted, EvaluationReport, Formula, IntegralSpec, Method,
    Term,
};
pub use wigner::{select_bridge_order, wigner_3j_zero, wigner_6j, SignedSqrtRational};
