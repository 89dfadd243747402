use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Caller supplied arguments that violate an operation's preconditions.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A text input (instance file, submission, config) failed to parse.
    /// `line` is 1-based.
    #[error("parse error at {file}:{line}: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },

    /// The instance cannot support generation (e.g. every node sits on the
    /// depot, so the prize formula divides by zero).
    #[error("degenerate instance: {0}")]
    Degenerate(String),

    /// A stepwise environment was driven after its episode finished.
    #[error("protocol error: {0}")]
    Protocol(String),

    /// A stepwise environment was asked to visit an unknown or already
    /// visited node.
    #[error("invalid action: {0}")]
    InvalidAction(String),

    /// A solver's search space is empty (every candidate has been cut).
    #[error("search space exhausted")]
    Exhausted,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(file: impl Into<String>, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
