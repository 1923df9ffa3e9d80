use thiserror::Error;

/// Errors raised by the group, sphere and flow computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    #[error("index {index} is outside the defined range {first}..={last}")]
    OutOfRange { index: i64, first: i64, last: i64 },

    #[error("missing S_{0}")]
    MissingEntry(i64),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("integration failed after theta = {last_good_theta}: {reason}")]
    IntegrationFailure { last_good_theta: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
