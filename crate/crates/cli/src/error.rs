use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Input(String),
    #[error("{command}: {source}")]
    Core {
        command: String,
        #[source]
        source: aspec_core::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core { source: aspec_core::Error::Internal(_), .. } => 3,
            _ => 2,
        }
    }

    pub fn parse(line: usize, message: impl Into<String>) -> CliError {
        CliError::Parse { line, message: message.into() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
