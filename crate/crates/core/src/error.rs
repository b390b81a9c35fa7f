use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Validation failures raised by the library. Every public operation that can
/// reject its input returns one of these; nothing panics on bad data.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid attribute space: {0}")]
    InvalidSpace(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid cost matrix: {0}")]
    InvalidCost(String),

    #[error("invalid confusion matrix: {0}")]
    InvalidConfusion(String),

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("score set has kind {found}, operation requires {expected}")]
    WrongScoreKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("score entry {0} has no ground-truth score")]
    MissingGroundTruth(usize),

    #[error("no prediction records")]
    NoPredictions,

    #[error("record {record}: mixes soft and hard predictions with earlier records")]
    MixedPredictions { record: usize },

    #[error("record {record}: outcome index {index} out of range for k={k}")]
    OutcomeOutOfRange {
        record: usize,
        index: usize,
        k: usize,
    },

    #[error("record {record}: {reason}")]
    InvalidRecord { record: usize, reason: String },

    #[error("transport solver did not converge after {0} augmentations")]
    SolverStalled(usize),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
