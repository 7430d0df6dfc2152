use thiserror::Error;

/// Errors raised by the arithmetic substrate and the coefficient pipelines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported bound 2^61")]
    ModulusTooLarge(u64),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("series is not invertible: constant coefficient is zero")]
    NotAUnit,
    #[error("digit {digit} is not in [0, {p})")]
    BadDigit { digit: u64, p: u64 },
    #[error("exponent {exponent} is smaller than the modulus degree {degree}")]
    DegreeTooSmall { exponent: u64, degree: usize },
    #[error("index {index} is below the first admissible index {min}")]
    IndexTooLow { index: i64, min: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("exact-division certificate failed: {0}")]
    NonPolynomialResult(String),
    #[error("precomputation too large: {0}")]
    TooLarge(String),
    #[error("mismatched prime fields ({0} vs {1})")]
    FieldMismatch(u64, u64),
}

pub type Result<T> = std::result::Result<T, Error>;
