use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed JSON input; `offset` is a byte offset into the document.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A required field is missing or has the wrong type.
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    /// A label row violates the label-set invariants. `row` is 1-based, header excluded.
    #[error("validation error in row {row}: {message}")]
    Validation { row: usize, message: String },

    #[error("reference error in row {row}: {message}")]
    Reference { row: usize, message: String },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("training error: {0}")]
    Training(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("leakage detected: {0}")]
    Leakage(String),

    #[error("model format error on line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
