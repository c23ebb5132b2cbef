use thiserror::Error;

/// Errors raised by the shift, growth and transport operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A weight family produced a non-finite log-weight.
    #[error("invalid weight: log-weight at index {index} is {value}")]
    InvalidWeight { index: i64, value: f64 },

    /// A custom weight family whose step ratios exceed the declared bound.
    #[error("unbounded weights: |L({index}+1) - L({index})| = {step} exceeds declared bound {bound}")]
    UnboundedWeights { index: i64, step: f64, bound: f64 },

    /// An index or exponent computation left the 64-bit range.
    #[error("index out of range: {0}")]
    Range(String),

    /// The norm (or its logarithm) of the zero vector was requested.
    #[error("norm of the zero vector is undefined")]
    UndefinedNorm,

    /// A parameter failed validation.
    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn checked_shift(n: i64, by: i64) -> Result<i64> {
    n.checked_add(by).ok_or_else(|| Error::Range(format!("{n} + {by} overflows i64")))
}
