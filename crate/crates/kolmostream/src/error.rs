//! Error type shared across the crate.
//!
//! Display strings double as the CLI's diagnostic output, so the formats of
//! `InsufficientSamples` and `Parse` are stable.

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument fell outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An operation was called in a state that does not admit it, e.g.
    /// ingesting into a finalized tester.
    #[error("state error: {0}")]
    State(String),

    /// The model (or pair of models) does not support the requested
    /// computation, e.g. exact distance between a real-valued and a lifted
    /// model.
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),

    /// The stream ended before the tester had consumed its sample budget.
    #[error("InsufficientSamples: needed {needed}, got {got}")]
    InsufficientSamples { needed: u64, got: u64 },

    /// A stream or configuration file could not be parsed. `line` is the
    /// 1-based physical line number.
    #[error("ParseError at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Malformed model spec, experiment plan, or pair file.
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn state(msg: impl Into<String>) -> Self {
        Error::State(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
