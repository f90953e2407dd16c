//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A pull-count or time index fell outside the valid domain.
    #[error("index {index} out of range [{min}, {max}] for {what}")]
    OutOfRange {
        what: &'static str,
        index: u64,
        min: u64,
        max: u64,
    },

    /// A generator or operation received an invalid parameter.
    #[error("invalid parameter {name}: {reason}")]
    Parameter { name: &'static str, reason: String },

    /// An instance-level construction failed (e.g. the adversarial-pair
    /// epsilon solve left no feasible value).
    #[error("instance construction failed: {0}")]
    Construction(String),

    /// An action was submitted that is not a member of the super-arm family.
    #[error("invalid action {action:?}: {reason}")]
    InvalidAction { action: Vec<u32>, reason: String },

    /// No feasible super arm exists for the requested solve.
    #[error("infeasible family: {0}")]
    Infeasible(String),

    /// Enumerating the super-arm family exceeded the configured cap.
    #[error("super-arm enumeration exceeded cap {cap}: at least {found} members exist")]
    EnumerationOverflow { cap: usize, found: usize },

    /// A policy was asked for an estimate it cannot produce yet.
    #[error("insufficient history: arm has {pulls} pulls, estimator needs at least {needed}")]
    InsufficientHistory { pulls: u64, needed: u64 },

    /// A configuration document failed validation.
    #[error("invalid config at {path}: {reason}")]
    Config { path: String, reason: String },

    /// Trace and instance shapes disagree.
    #[error("trace/instance mismatch: {0}")]
    TraceMismatch(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
