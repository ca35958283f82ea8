use std::path::PathBuf;

use fsbi_core::Error as CoreError;

/// Process exit codes.
pub mod code {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const PARTIAL: u8 = 4;
    pub const SCHEMA: u8 = 5;
}

#[derive(thiserror::Error, Debug)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} of {total} entries failed")]
    Partial { failed: usize, total: usize },

    #[error("{0}")]
    Schema(String),

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => code::USAGE,
            CliError::Io { .. } => code::IO,
            CliError::Partial { .. } => code::PARTIAL,
            CliError::Schema(_) => code::SCHEMA,
            CliError::Core(e) => match e {
                CoreError::Io { .. } | CoreError::UnsupportedPngFormat { .. } => code::IO,
                CoreError::UnknownWavelet(_)
                | CoreError::InvalidConfig(_)
                | CoreError::InvalidSigma(_)
                | CoreError::InvalidRadius(_) => code::USAGE,
                _ => code::SCHEMA,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
