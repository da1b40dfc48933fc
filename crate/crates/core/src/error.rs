use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("operator has wrong degree: {0}")]
    DegreeMismatch(String),
    #[error("operator does not square to zero: {0}")]
    NotSquareZero(String),
    #[error("missing operation of arity {0}")]
    MissingArity(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("left-linearity law violated: {0}")]
    LawViolated(String),
    #[error("A-infinity identities fail: {0}")]
    StasheffFailure(String),
    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),
    #[error("algebra has no unit")]
    NoUnit,
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("element is not a cocycle")]
    NotClosed,
    #[error("no sign convention satisfies the identity: {0}")]
    NoConsistentConvention(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
