//! Error type shared by every module.

use thiserror::Error;

/// Failure modes of constructors, estimators and analytic helpers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("{what} {requested} exceeds the cap of {cap}")]
    Budget {
        what: &'static str,
        requested: u128,
        cap: u128,
    },

    #[error("body has no {0}")]
    Capability(&'static str),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by malformed input rather than an estimator
    /// or constructor declining the request.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidDimension(_)
                | Error::DimensionMismatch { .. }
                | Error::Parameter(_)
                | Error::Domain(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
