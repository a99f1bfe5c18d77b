//! Command-line front end: synthetic data, contrast maps, tracking,
//! evaluation and rendering.

pub mod args;
pub mod commands;
pub mod manifest;
pub mod render;

use std::process::ExitCode;

pub use commands::run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] salttrack_core::Error),
}

impl CliError {
    /// 1 usage, 2 data, 3 numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(_) => 2,
        }
    }
}

/// Result of a command that ran to completion; `track` reports per-section
/// failures this way rather than aborting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    DataFailure,
    NumericalFailure,
}

impl Outcome {
    pub fn exit_code(self) -> ExitCode {
        ExitCode::from(match self {
            Outcome::Success => 0,
            Outcome::DataFailure => 2,
            Outcome::NumericalFailure => 3,
        })
    }
}
