use num_bigint::BigUint;
use thiserror::Error;

use crate::certify::ThresholdPair;

pub type Result<T, E = PlpError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum PlpError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("generation error: {0}")]
    Generation(String),

    #[error("not all terms are composite: {term} is prime")]
    NotAllComposite { term: BigUint },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error(
        "sequence has {len} terms, below the required {required} \
         (thresholds: exact = {}, rs = {})",
        thresholds.exact,
        thresholds.rs
    )]
    BelowThreshold {
        len: usize,
        required: u64,
        thresholds: ThresholdPair,
    },

    #[error("invalid sequence: {0}")]
    InvalidSequence(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for PlpError {
    fn from(e: serde_json::Error) -> Self {
        PlpError::Parse(e.to_string())
    }
}
