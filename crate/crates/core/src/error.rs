use thiserror::Error;

/// Failure modes of the analytic pipeline and the quadrature oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// No bridge order satisfies both triangle windows with even triad sums.
    #[error("no parity-valid bridge order for lambda = {lambda:?}")]
    NoValidBridge { lambda: [u32; 4] },

    /// The dividing (000) 3j symbol of the triple-Bessel formula vanishes.
    #[error("3j prefactor ({j1} {j2} {j3}; 0 0 0) vanishes")]
    PrefactorZero { j1: u32, j2: u32, j3: u32 },

    /// k1 and k2 are too close for a bridge order L >= 1.
    #[error("momenta k1 = {k1} and k2 = {k2} are degenerate for bridge order L = {bridge}")]
    DegenerateMomenta { k1: f64, k2: f64, bridge: u32 },

    /// The oracle exhausted its radius and refinement budget.
    #[error("quadrature did not converge: estimate {estimate:e} above tolerance {tolerance:e}")]
    NoConvergence { estimate: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NoValidBridge { .. } => "NoValidBridge",
            Error::PrefactorZero { .. } => "PrefactorZero",
            Error::DegenerateMomenta { .. } => "DegenerateMomenta",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::Domain(_) => "DomainError",
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
