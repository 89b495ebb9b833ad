//! Crate-wide error type and exit-code mapping for the CLI.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors surfaced by auction evaluation, learning routines, and experiment I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// A vector argument does not match the configured dimensions.
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A configuration value violates its documented constraints.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// An operation received fewer data points than it can work with.
    #[error("insufficient data for {what}: need at least {needed}, got {got}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    /// A sample was degenerate (e.g. zero variance where spread is required).
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// A triangular system has a (numerically) zero diagonal entry.
    #[error("singular diagonal at index {index}: |{value:e}| below threshold")]
    SingularDiagonal { index: usize, value: f64 },

    /// A numerical routine failed to produce a usable result.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// A dataset file does not match its recorded provenance.
    #[error("provenance mismatch for {path}: {detail}")]
    ProvenanceMismatch { path: String, detail: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for input/configuration problems,
    /// 3 for numerical failures, 1 for everything else (I/O and the like).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DimensionMismatch { .. }
            | Error::InvalidConfig(_)
            | Error::InsufficientData { .. }
            | Error::DegenerateSample(_)
            | Error::ProvenanceMismatch { .. } => 2,
            Error::SingularDiagonal { .. } | Error::NumericalFailure(_) => 3,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => 1,
        }
    }
}
