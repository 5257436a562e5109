use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// The variants map onto process exit codes in the command-line front end:
/// usage problems exit 1, bad input data exits 2, everything else exits 3.
#[derive(Debug, Error)]
pub enum Error {
    /// A value violated a type invariant (range, uniqueness, consistency).
    #[error("validation error: {0}")]
    Validation(String),

    /// A document could not be parsed.
    #[error("parse error in {source_name}: {message}")]
    Parse { source_name: String, message: String },

    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A configuration value was out of range or inconsistent.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An operation that needs data was handed none.
    #[error("empty input: {0}")]
    Empty(String),

    #[error("{0}")]
    Usage(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 1 usage, 2 validation, 3 internal.
    /// Prefixes the message of a validation error with where it happened.
    pub fn within(self, context: &str) -> Error {
        match self {
            Error::Validation(m) => Error::Validation(format!("{context}: {m}")),
            other => other,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Validation(_) | Error::Parse { .. } | Error::Empty(_) | Error::Config(_) => 2,
            Error::Contract(_) | Error::Io { .. } => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
