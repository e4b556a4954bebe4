use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// The `OddN1Sum`, `ParityViolation` and `BoundViolation` variants report a
/// contradiction between the number theory and the implementation. They are
/// never expected in a correct build; the checkers surface them instead of
/// panicking so that a verification run can print the counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is smaller than 2")]
    InvalidModulus(i64),
    #[error("{a} is not invertible modulo {m}")]
    NotInvertible { a: i64, m: i64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid triple: {0}")]
    InvalidTriple(String),
    #[error("p*q*r = {0} exceeds the 2^40 cap")]
    ProductTooLarge(u128),
    #[error("index k = {k} is outside the window ({lo}, {hi})")]
    OutOfWindow { k: i64, lo: i64, hi: i64 },
    #[error("index n = {n} is outside [0, {max}]")]
    IndexOutOfRange { n: i64, max: i64 },
    #[error("degree {deg} exceeds the limit {limit}")]
    DegreeTooLarge { deg: u64, limit: u64 },
    #[error("N1 difference sum is odd at n = {0}")]
    OddN1Sum(i64),
    #[error("coefficient difference forms disagree at n = {n}: {detail}")]
    ParityViolation { n: i64, detail: String },
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("this statement requires p > 3, got p = {0}")]
    RequiresPGreaterThan3(u64),
    #[error("threshold must be positive")]
    NonPositiveThreshold,
}

pub type Result<T> = std::result::Result<T, Error>;
