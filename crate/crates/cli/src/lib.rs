//! Command-line front end for `noonsim`: configuration, fringe runs and the
//! built-in closed-form check suite.

pub mod config;
pub mod run;
pub mod verify;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Simulation(#[from] noonsim::Error),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit code: 1 for any configuration, simulation or I/O error.
    pub fn exit_code(&self) -> u8 {
        1
    }
}

/// Exit code when `verify` finds a failing check.
pub const EXIT_VERIFY_FAILED: u8 = 2;
