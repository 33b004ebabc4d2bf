use thiserror::Error;

/// Errors raised by constructions and drivers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("parameters too large: field of order {order} exceeds the limit of {limit} elements")]
    TooLarge { order: u64, limit: u64 },
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("element {elem} does not belong to a field of order {order}")]
    ForeignElement { elem: u64, order: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero vector does not define a projective point")]
    ZeroVector,
    #[error("degenerate frame: {0}")]
    DegenerateFrame(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a candidate curve: {0}")]
    NotCandidateCurve(String),
    #[error("not disjoint: {0}")]
    NotDisjoint(String),
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
