use thiserror::Error;

/// Errors raised by the estimators and geometric primitives.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("erosion of the window by r = {r} is empty")]
    EmptyErosion { r: f64 },

    #[error("too few points for estimation: {realized} sampled, need at least 2")]
    TooFewPoints { realized: usize },

    #[error("curve generation failed: {0}")]
    Generation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
