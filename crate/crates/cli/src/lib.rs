//! Command-line front end for `dvn`: the JSON machine format, Graphviz export
//! and the subcommands wrapping the library.

pub mod commands;
pub mod format;
pub mod input;

use thiserror::Error;

/// A failed invocation. Usage errors exit with 2, everything the library
/// rejects exits with 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl From<dvn::Error> for CliError {
    fn from(e: dvn::Error) -> CliError {
        CliError::Domain(e.to_string())
    }
}
