//! Error types shared across the crate.

use thiserror::Error;

/// Unified error type for scoring, calibration, selection, simulation,
/// and file handling.
#[derive(Debug, Error)]
pub enum Error {
    /// A token record is missing a field required by the requested score,
    /// or a field fails its basic sanity checks.
    #[error("malformed record `{item_id}`: {reason}")]
    MalformedRecord { item_id: String, reason: String },

    /// A per-position sequence was empty where at least one token is required.
    #[error("empty token sequence in record `{0}`")]
    EmptySequence(String),

    /// Model columns or item rows do not line up between two inputs.
    #[error("alignment error: {0}")]
    Alignment(String),

    /// A numeric or structural parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Fewer than `min_tail` maxima lie strictly above the requested lambda.
    #[error("insufficient tail: {found} maxima above lambda={lambda}, need {needed}")]
    InsufficientTail {
        lambda: f64,
        found: usize,
        needed: usize,
    },

    /// An evaluation point fell outside [0, 1].
    #[error("domain error: {0}")]
    Domain(String),

    /// The Monte Carlo protocol could not run (e.g. empty subsample).
    #[error("protocol error: {0}")]
    Protocol(String),

    /// Line-numbered parse failure while ingesting JSONL input.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
