use thiserror::Error;

use crate::design::{Pair, Point};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid pair: both points are {0}")]
    InvalidPair(Point),

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("point {point} out of range for v={v}")]
    PointOutOfRange { point: u32, v: u32 },

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("invalid order v={v}: {reason}")]
    InvalidOrder { v: u64, reason: String },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid modulus {0}: must be odd and at least 3")]
    InvalidModulus(u64),

    #[error("inconsistent rotational spec: {0}")]
    InconsistentSpec(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("input is not nested on every pair: {0} is not an ND-pair")]
    MissingNdPair(Pair),

    #[error("value {value} outside [{lo}, {hi}]")]
    OutOfRange { value: u64, lo: u64, hi: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("unknown catalog entry {name:?}; available: {available}")]
    NotFound { name: String, available: String },
}
