use thiserror::Error;

#[derive(Debug, Error)]
pub enum CavresError {
    /// An input fell outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A computed state violated a structural invariant beyond tolerance.
    /// Elements are closed-form, so this indicates a bug, not roundoff.
    #[error("validation error: {0}")]
    Validation(String),
    /// Bad CLI flags or config file.
    #[error("usage error: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CavresError>;
