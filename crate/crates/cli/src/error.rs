use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },

    #[error("{0}")]
    Output(String),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("{0}")]
    Model(qi_fading::Error),

    #[error("{failed} validation check(s) failed")]
    ValidationFailed { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Output(_) => EXIT_IO,
            CliError::InvalidParameter { .. } | CliError::Model(_) => EXIT_INVALID,
            CliError::ValidationFailed { .. } => EXIT_VALIDATION,
        }
    }

    pub fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<qi_fading::Error> for CliError {
    fn from(e: qi_fading::Error) -> Self {
        match e {
            qi_fading::Error::InvalidParameter { field, reason } => CliError::invalid(field, reason),
            other => CliError::Model(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
