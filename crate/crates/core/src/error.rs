use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the range where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller broke a structural precondition (e.g. a non-Hermitian matrix
    /// handed to the Hermitian eigensolver).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("numeric error: {message} (residual {residual:.3e})")]
    Numeric { message: String, residual: f64 },

    /// Iterative refinement gave up; `best` is the lowest value seen.
    #[error("refinement did not converge after {iterations} sweeps (best value {best})")]
    NotConverged { iterations: usize, best: f64 },

    #[error("degenerate branch: {0}")]
    Degenerate(String),

    #[error("no sign change in bracket [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
