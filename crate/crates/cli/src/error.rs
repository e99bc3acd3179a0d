use otto_core::OttoError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flag value or combination.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] OttoError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    /// 2 for anything the caller can fix by changing flags, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(OttoError::InvalidParameter { .. } | OttoError::MissingHotBath) => 2,
            CliError::Core(_) | CliError::Io { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
