use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or malformed input files.
    #[error("{0}")]
    Invalid(String),

    /// The numerics broke down or failed to converge.
    #[error(transparent)]
    Numerical(deltoid_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        CliError::Invalid(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

impl From<deltoid_core::Error> for CliError {
    fn from(e: deltoid_core::Error) -> Self {
        use deltoid_core::Error as E;
        match e {
            E::Domain(_) | E::Dimension { .. } | E::Parse { .. } => CliError::Invalid(e.to_string()),
            E::Io(source) => CliError::Io { path: PathBuf::from("-"), source },
            other => CliError::Numerical(other),
        }
    }
}
