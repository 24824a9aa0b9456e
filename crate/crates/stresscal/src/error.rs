//! Crate-wide error type and result alias.
//!
//! Every fallible public operation returns [`Result`]. The variants are
//! grouped by what went wrong rather than by module, so callers (and the CLI
//! exit-code mapping) can react uniformly: configuration and usage problems
//! map to exit code 2, everything else to exit code 1.

use thiserror::Error;

/// All errors produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A schema file was missing, malformed, or inconsistent with the data.
    #[error("schema error: {0}")]
    Schema(String),

    /// A data file could not be parsed (bad number, missing column, ...).
    #[error("parse error in {path} (record {record}): {message}")]
    Parse {
        path: String,
        record: usize,
        message: String,
    },

    /// An input collection was empty where at least one element is required.
    #[error("empty input: {0}")]
    EmptyInput(String),

    /// A persisted model artifact has an unsupported format version.
    #[error("incompatible model artifact: found format version {found}, this build supports {supported}")]
    IncompatibleFormat { found: u32, supported: u32 },

    /// A numeric or structural parameter was out of its documented range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A signal was too short or too degenerate to process.
    #[error("insufficient signal: {0}")]
    InsufficientSignal(String),

    /// A data set was too small for the requested operation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// Two inputs that must agree in shape or vocabulary did not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An evaluation protocol was asked to do something it cannot
    /// (unknown subject, too few rows per fold, too few subjects, ...).
    #[error("protocol error: {0}")]
    Protocol(String),

    /// Train/test contamination was detected (overlapping subjects or rows).
    #[error("contamination: {0}")]
    Contamination(String),

    /// A selection policy produced an unusable result (e.g. zero features).
    #[error("selection policy error: {0}")]
    Policy(String),

    /// The command line was used incorrectly.
    #[error("usage error: {0}")]
    Usage(String),

    /// The run configuration file was missing, malformed, or inconsistent.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code the CLI should use for this error.
    ///
    /// Usage and configuration mistakes exit with 2; runtime failures
    /// (bad data, failed detection, broken protocol preconditions) exit
    /// with 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Config(_) => 2,
            _ => 1,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
