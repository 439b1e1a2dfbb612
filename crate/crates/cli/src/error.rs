use thiserror::Error;

/// Errors surfaced by the command line.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or an unsupported combination; exit code 1.
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    /// Well-formed input that fails validation.
    #[error("{0}")]
    InvalidInput(String),

    #[error("{0}")]
    Core(#[from] trotter_core::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
