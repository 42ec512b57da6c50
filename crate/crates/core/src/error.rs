use thiserror::Error;

/// Errors raised by the audit pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("EmptyInput: no header or data rows")]
    EmptyInput,

    #[error("MissingColumn: required column `{0}` not found in header")]
    MissingColumn(&'static str),

    #[error("MalformedRow: data row {row}: {reason}")]
    MalformedRow { row: usize, reason: String },

    #[error("NonPositiveSE: data row {row}: standard error {se} must be > 0")]
    NonPositiveSe { row: usize, se: f64 },

    #[error("EmptyDataset: operation needs at least one study")]
    EmptyDataset,

    #[error("InsufficientStudies: need at least {needed} studies, got {got}")]
    InsufficientStudies { needed: usize, got: usize },

    #[error("DegenerateInput: {0}")]
    DegenerateInput(String),

    #[error("OutOfDomain: {0}")]
    OutOfDomain(String),

    #[error("InvalidGrid: {0}")]
    InvalidGrid(String),

    #[error("InvalidConfig: {0}")]
    InvalidConfig(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
