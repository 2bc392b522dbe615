use thiserror::Error;

/// Errors raised by every module of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Result would need more p-adic digits than are available.
    #[error("precision error: {0}")]
    Precision(String),
    /// A truncation cap (degree, exponent, level) would be exceeded.
    #[error("truncation overflow: {0}")]
    Overflow(String),
    /// A certified identity failed at working precision.
    #[error("identity failure: {0}")]
    Identity(String),
    /// A quantity that must be invertible vanished.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// An iterative limit did not stabilize.
    #[error("no convergence: {0}")]
    NoConvergence(String),
    /// Requested feature is outside the implemented model.
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// Malformed configuration or command-line input.
    #[error("{0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
