use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Γ evaluated at a nonpositive integer.
    #[error("gamma function has a pole at {0}")]
    Pole(f64),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    /// A series or quadrature could not reach the requested tolerance within its budget.
    #[error("did not converge: {0}")]
    Convergence(String),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite value produced: {0}")]
    NonFinite(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
