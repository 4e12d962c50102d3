use thiserror::Error;

/// Crate-wide error type. The CLI maps variants onto exit codes, so keep the
/// distinction between "bad input", "infeasible configuration" and "refused
/// for cost reasons" intact when adding variants.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally valid configuration that cannot be realized.
    #[error("infeasible configuration: {0}")]
    Config(String),

    /// Work refused because it would exceed a guard limit.
    #[error("resource guard: {0}")]
    Guard(String),

    /// Malformed input file or unparsable value.
    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
    pub fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// Process exit code for the CLI: 2 bad arguments or input, 3 infeasible
    /// configuration, 4 resource guard.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Parse(_) | Error::Io(_) => 2,
            Error::Config(_) => 3,
            Error::Guard(_) => 4,
        }
    }
}
