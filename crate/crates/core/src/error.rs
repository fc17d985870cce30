use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A value violates an operation precondition.
    #[error("invalid input: {0}")]
    Input(String),

    /// A pattern file row could not be used.
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: u64, message: String },

    /// The requested antenna/burst combination admits no optimal slope construction.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The closed-form decomposition is only defined when every transmit
    /// antenna carries the same number of packets.
    #[error("decomposition unavailable: {0}")]
    DecompositionUnavailable(String),

    #[error("grid of {evaluations} points exceeds the limit of {limit}")]
    GridTooLarge { evaluations: u128, limit: u128 },

    /// Configuration file problems; the message names the field.
    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

/// Writes `contents` to `path`, attaching the path to any I/O failure.
pub(crate) fn write_file(path: &std::path::Path, contents: impl AsRef<[u8]>) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
