use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// Parameter violates a documented precondition.
    #[error("invalid parameter: {0}")]
    Parameter(String),
    /// An iterative method did not settle within its budget.
    #[error("no convergence: {0}")]
    NonConvergence(String),
    /// The tail descriptor of a sequence cannot certify convergence of a series.
    #[error("convergence cannot be certified: {0}")]
    Undeclarable(String),
    /// Not enough (or unusable) data points.
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}
