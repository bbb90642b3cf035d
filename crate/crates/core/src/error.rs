use thiserror::Error;

use crate::ring::RingDomain;

/// Errors raised by the codec, the baselines and the simulation harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("ring domain mismatch: {0:?} vs {1:?}")]
    DomainMismatch(RingDomain, RingDomain),

    #[error("rational integers carry no second coordinate (got b = {0})")]
    NonZeroImaginary(i64),

    #[error("integer overflow in exact ring arithmetic")]
    Overflow,

    #[error("division by zero")]
    DivisionByZero,

    #[error("gcd(0, 0) is undefined")]
    ZeroGcd,

    #[error("{0} is not invertible modulo the prime")]
    NotInvertible(String),

    #[error("{0} is not a prime of its ring")]
    NotPrime(String),

    #[error("{0} is an inert prime; its residue field has p^2 elements and is not a prime field")]
    InertPrime(String),

    #[error("non-finite complex sample")]
    NonFinite,

    #[error("{0} is not a prime field size")]
    InvalidField(u32),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("symbol {value} does not belong to F_{q}")]
    FieldMismatch { value: u32, q: u32 },

    #[error("generator matrix does not have full row rank")]
    RankDeficient,

    #[error("codebook with {0} codewords is too large for exhaustive decoding")]
    CodebookTooLarge(u128),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
