//! Error type shared by every module of the crate.

use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: BigUint,
        budget: u64,
    },

    #[error("invalid extension of dimension {dim}: scale {requested} is below current scale {current}")]
    InvalidExtension {
        dim: usize,
        current: u64,
        requested: u64,
    },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("invalid table entry: {0}")]
    InvalidEntry(String),

    #[error("invalid weights: expected {expected}, got {got}")]
    InvalidWeights { expected: usize, got: usize },

    #[error("invalid classifier: {0}")]
    InvalidClassifier(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("invalid dimension index {dim} for a {dims}-dimensional domain")]
    InvalidDimension { dim: usize, dims: usize },

    #[error("extension schedule is empty")]
    EmptySchedule,

    #[error("invalid extension schedule: {0}")]
    InvalidSchedule(String),

    #[error("degenerate domain: cardinality {0} is below 2")]
    DegenerateDomain(BigUint),

    #[error("block partition is empty")]
    EmptyBlockPartition,

    #[error("invalid block partition: {0}")]
    InvalidBlocks(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unknown {kind} `{value}`")]
    UnknownName { kind: &'static str, value: String },

    #[error("no collision analysis available: {0}")]
    Undecidable(String),
}
