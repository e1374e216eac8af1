use std::path::PathBuf;
use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("unknown subcommand: {0}")]
    UnknownSubcommand(String),

    #[error("{0}")]
    Core(#[from] sqrtlab_core::Error),

    #[error("i/o error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("self-check failed: {0}")]
    ChecksFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        use sqrtlab_core::Error as E;
        match self {
            CliError::Usage(_) | CliError::UnknownSubcommand(_) => ExitCode::from(2),
            CliError::Core(E::InvalidParameter(_) | E::NotPrime(_) | E::NotUnit { .. } | E::Budget(_)) => {
                ExitCode::from(2)
            }
            _ => ExitCode::from(1),
        }
    }
}
