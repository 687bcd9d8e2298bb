//! Shared error type. Variants map onto the CLI exit codes: input problems
//! exit 2, resource exhaustion exits 3, analysis failures exit 4.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad vertex ids, unparseable words, invalid configs.
    #[error("input error: {0}")]
    Input(String),

    /// A construction would exceed its configured budget. `needed` is a lower
    /// bound on the size the construction reached before aborting.
    #[error("resource limit exceeded: needs at least {needed}, budget is {budget}; raise the budget or switch to a sampled mode where one exists")]
    Resource { needed: u64, budget: u64 },

    /// The requested operation is not defined for this family of inputs.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// An analysis ran but could not produce a verdict under its contract.
    #[error("analysis failure: {0}")]
    Analysis(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn analysis(msg: impl Into<String>) -> Self {
        Error::Analysis(msg.into())
    }

    /// Process exit code for the CLI. 0 is reserved for success.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Json(_) | Error::Unsupported(_) => 2,
            Error::Resource { .. } => 3,
            Error::Analysis(_) => 4,
            Error::Io(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
