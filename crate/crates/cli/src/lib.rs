//! Verification front end: check registry, value cache and reports.

pub mod cache;
pub mod checks;
pub mod commands;
pub mod config;
pub mod report;
pub mod suite;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error(transparent)]
    Core(#[from] tvk_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for anything the caller got wrong, 3 for numeric non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(tvk_core::Error::NonConvergence { .. }) => 3,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}
