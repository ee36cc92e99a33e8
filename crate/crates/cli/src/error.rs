use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: palab_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("self-test failed: {0}")]
    Acceptance(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric { .. } | CliError::Io { .. } => 3,
            CliError::Acceptance(_) => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Attaches experiment context to core errors.
pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T>;
}

impl<T> Context<T> for palab_core::Result<T> {
    fn context(self, what: impl Into<String>) -> CliResult<T> {
        self.map_err(|source| match source {
            palab_core::Error::ParameterDomain(msg) | palab_core::Error::Argument(msg) => {
                CliError::Config(format!("{}: {msg}", what.into()))
            }
            other => CliError::Numeric { context: what.into(), source: other },
        })
    }
}
