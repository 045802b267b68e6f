use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("horizon {horizon} is smaller than the largest window {window}")]
    HorizonTooSmall { horizon: u64, window: u64 },

    #[error("no data: the set has no members in [0, {horizon}]")]
    NoData { horizon: u64 },

    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("zero weight at index {index}")]
    ZeroWeight { index: i64 },

    #[error("insufficient block: l0 = {l0} (need at least 2)")]
    InsufficientBlock { l0: u64 },

    #[error("family fails the gap condition: {0}")]
    GapViolation(String),

    #[error("family exhausted at level {level}: condition {condition} fails for every candidate (best value {best_value:e}, tolerance {tolerance:e})")]
    FamilyExhausted {
        level: usize,
        condition: String,
        best_value: f64,
        tolerance: f64,
    },

    #[error("no density: density estimate is zero")]
    NoDensity,

    #[error("alpha profile violates alpha_n >= C alpha_(n-1) at n = {index}")]
    ProfileViolation { index: i64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
