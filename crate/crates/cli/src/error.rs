use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the command-line runner, each mapped to an exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] wearout_core::Error),

    #[error("cannot read `{path}`: {source}")]
    Input {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("cannot write `{path}`: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for bad input, 3 for a capability the engine lacks, 4 for a model
    /// that cannot be run to completion, 1 for output failures.
    pub fn exit_code(&self) -> i32 {
        use wearout_core::Error as E;
        match self {
            CliError::Model(E::Unsupported(_)) => 3,
            CliError::Model(E::NonTerminating { .. } | E::Numerical(_)) => 4,
            CliError::Model(_) | CliError::Input { .. } | CliError::Usage(_) => 2,
            CliError::Output { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
