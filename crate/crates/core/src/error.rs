use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point outside the domain: {0}")]
    OutsideDomain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("unbounded simplex: intercept {axis} is infinite")]
    UnboundedSimplex { axis: usize },

    #[error("unknown boundedness of the indicatrix; supply per-axis bounds")]
    UnknownBoundedness,

    #[error("degenerate along axis {axis}: {reason}")]
    Degenerate { axis: usize, reason: String },

    #[error("infeasible program: {0}")]
    Infeasible(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("solver did not converge (gap {gap:e})")]
    NonConvergence { gap: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
