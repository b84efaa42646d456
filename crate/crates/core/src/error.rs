use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("{method} did not converge for a {n}x{n} matrix within {cap} iterations")]
    NoConvergence {
        method: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("cannot parse `{field}`: {reason}")]
    Parse { field: String, reason: String },

    #[error("input rejected by `{check}`: {family} residual {residual:e} exceeds {threshold:e}")]
    NotInFamily {
        check: &'static str,
        family: &'static str,
        residual: f64,
        threshold: f64,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of an iterative numerical method (as opposed to bad input).
    pub fn is_numeric_failure(&self) -> bool {
        matches!(self, Error::NoConvergence { .. } | Error::NonFinite { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
