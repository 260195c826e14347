use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad weights, inconsistent shapes, disconnected graphs.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Input is well formed but outside the domain of the requested operation.
    #[error("refused: {0}")]
    Refused(String),

    /// A configured size cap would be exceeded.
    #[error("refused: {what} is {size}, which exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    /// A series or quadrature did not reach the requested accuracy.
    #[error("no convergence in {context}: value {value:e}, error estimate {error:e}")]
    NonConvergence {
        context: String,
        value: f64,
        error: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub(crate) fn refused(msg: impl Into<String>) -> Self {
        Error::Refused(msg.into())
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence { .. } => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}
