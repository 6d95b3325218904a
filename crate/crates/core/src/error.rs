use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite coordinate in point")]
    NonFinite,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("solver truncated at step {step} with certificate {achieved:e}")]
    SolverTruncated { step: usize, achieved: f64 },

    #[error("hindsight optimum not certified: achieved {achieved:e}, required {required:e}")]
    HindsightUncertified { achieved: f64, required: f64 },

    #[error("missing hindsight optimum for trajectory")]
    MissingHindsight,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn config<S: Into<String>>(msg: S) -> Error {
    Error::Config(msg.into())
}
