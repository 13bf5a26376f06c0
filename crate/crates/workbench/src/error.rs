use std::fmt;

use asr_core::Error as CoreError;

/// Exit-code bearing failure of a workbench command.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("capacity guard: {0}")]
    Capacity(String),

    #[error("io error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn input(msg: impl fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 2,
            CliError::Input(_) | CliError::Io { .. } => 3,
            CliError::Capacity(_) => 4,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Capacity(_) | CoreError::CollapsedUnavailable(_) => CliError::Capacity(e.to_string()),
            CoreError::ClawAbsent | CoreError::SearchExhausted { .. } | CoreError::Inconsistent(_) => {
                CliError::Verification(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
