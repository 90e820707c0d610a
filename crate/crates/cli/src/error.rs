//! Process-level error classification: usage and configuration problems
//! exit with 1, runtime and I/O failures with 2.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad command line or an experiment file that asks for the wrong model.
    #[error("{0}")]
    Usage(String),
    /// A file that parsed but violates an invariant; the message names the field.
    #[error("{0}")]
    Config(String),
    /// I/O or an unexpected failure while running a valid experiment.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn config(message: impl Into<String>) -> Self {
        CliError::Config(message.into())
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError::Runtime(message.into())
    }
}
