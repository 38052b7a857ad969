use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shape mismatch: matrix is {rows}x{cols}, vector has length {len}")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },

    #[error("point set is empty")]
    EmptySet,

    #[error("point set contains a repeated point at index {index}")]
    DuplicatePoint { index: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("polynomial is not integer-valued: {0}")]
    NotIntegerValued(String),

    #[error("family hypothesis `{hypothesis}` failed: {detail}")]
    Hypothesis { hypothesis: &'static str, detail: String },

    #[error("{0} is not prime")]
    NotPrime(String),

    #[error("coefficients are not coprime to the modulus: gcd = {0}")]
    NotCoprime(String),

    #[error("operation requires exact (rational) points")]
    RequiresExact,

    #[error("frequency {index} is outside the coefficient table (max {max})")]
    OutOfTable { index: i64, max: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
