//! Crate-wide error type and the process exit-code contract.

use std::io;
use std::path::Path;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside its physical or mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The API or CLI was driven in an unsupported way (empty input,
    /// missing state, out-of-order steps, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// An input file violated the data contract. `line` is 1-based and
    /// counts the header row as line 1.
    #[error("{path}: line {line}: {reason}")]
    Input {
        path: String,
        line: usize,
        reason: String,
    },

    /// A configuration file was rejected.
    #[error("config {path}: {reason}")]
    Config { path: String, reason: String },

    /// Every observed loss was zero, so the running average admits no
    /// finite lifetime estimate.
    #[error("no observable aging: cumulative moving average is zero")]
    NoObservableAging,

    /// I/O failure, annotated with the path involved.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn input(path: &Path, line: usize, reason: impl Into<String>) -> Self {
        Error::Input {
            path: path.display().to_string(),
            line,
            reason: reason.into(),
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Stable exit-code contract: 0 success, 1 validation/usage, 2 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            _ => 1,
        }
    }
}
