use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The ODE integrator failed (step underflow, non-finite state).
    #[error("integration failure: {0}")]
    Integration(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    /// A post-condition check on a computed object failed.
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures caused by the caller's parameters rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::InvalidInput(_) | Error::Io(_))
    }
}
