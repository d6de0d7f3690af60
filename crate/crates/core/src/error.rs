use thiserror::Error;

/// Errors raised across the crate. The CLI maps these onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Typed refusal for operations that need commuting channel outputs.
    #[error("channel outputs do not commute (commutator trace norm {norm:.3e})")]
    NonCommuting { norm: f64 },

    #[error("index {index} out of range for blocklength {blocklength}")]
    IndexOutOfRange { index: usize, blocklength: usize },

    #[error("missing scalar tracker for index {0}")]
    MissingTracker(usize),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
