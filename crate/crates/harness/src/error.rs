use std::path::PathBuf;

use thiserror::Error;

/// Failures of the experiment runner, grouped by exit code.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("{context}: {source}")]
    Solver {
        context: String,
        #[source]
        source: pseudospec::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("golden mismatch: {0}")]
    GoldenMismatch(String),
}

impl HarnessError {
    pub fn validation(field: &str, message: impl Into<String>) -> Self {
        Self::Validation {
            field: field.to_string(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for bad input, 2 for numerical breakdown.
    pub fn exit_code(&self) -> i32 {
        use pseudospec::Error as E;
        match self {
            Self::Solver { source, .. } => match source {
                E::Domain { .. }
                | E::InvalidArgument(_)
                | E::GridMismatch
                | E::WrongFamily { .. }
                | E::DegenerateInterval { .. }
                | E::UnknownName(_) => 1,
                _ => 2,
            },
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Attaches experiment context to a solver error.
pub trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T>;
}

impl<T> Context<T> for pseudospec::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| HarnessError::Solver {
            context: what(),
            source,
        })
    }
}
