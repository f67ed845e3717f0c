use thiserror::Error;

/// Errors produced by the library and surfaced by the CLI.
#[derive(Debug, Error)]
pub enum Error {
    /// A state builder could not reach the requested tail tolerance within
    /// the allowed number of Fock modes.
    #[error("truncation failure: {0}")]
    Truncation(String),

    /// An input violated a documented precondition (norm, Hermiticity, range).
    #[error("validation error: {0}")]
    Validation(String),

    /// A user-supplied configuration field was malformed.
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    /// A numerical routine produced a result outside its contract.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the CLI: 2 for configuration problems,
    /// 3 for numerical failures (truncation, PSD violation), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Validation(_) => 2,
            Error::Truncation(_) | Error::Numerical(_) => 3,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
