//! Error types shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: expected {expected}")]
    Parse { line: usize, expected: String },
    #[error("validation error: {0}")]
    Validation(#[from] ValidationError),
    #[error("point {0} is not in the carrier")]
    PointNotInCarrier(String),
    #[error("operation is undefined on the empty set")]
    EmptySet,
    #[error("unsupported space kind for this operation: {0}")]
    UnsupportedKind(String),
    #[error("net index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("set is not in the witness family: {0}")]
    NotInWitnessFamily(String),
    #[error("invalid net: {0}")]
    InvalidNet(String),
    #[error("invalid subnet: {0}")]
    InvalidSubnet(String),
}

#[derive(Debug, Error)]
pub enum ValidationError {
    #[error("order is not antisymmetric: {0} <= {1} <= {0}")]
    NotAntisymmetric(String, String),
    #[error("declared sup {declared} of chain {chain} is not a least upper bound: {reason}")]
    SupNotLub {
        chain: String,
        declared: String,
        reason: String,
    },
    #[error("unknown cell or point: {0}")]
    UnknownCell(String),
    #[error("{0}")]
    Invalid(String),
}
