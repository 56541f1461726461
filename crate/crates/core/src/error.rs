use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Cholesky pivot was non-positive.
    #[error("matrix is not positive definite: pivot {pivot:e} at index {index}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    /// An iterative eigenvalue computation exhausted its budget.
    #[error("eigenvalue iteration did not converge within {budget} iterations")]
    NoConvergence { budget: usize },

    /// A NaN or infinity appeared where a finite value is required.
    #[error("non-finite value in {context}")]
    NonFiniteValue { context: &'static str },

    /// Two operands that must share a length do not.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A dimension outside the supported range.
    #[error("invalid dimension {dim}: {reason}")]
    InvalidDimension { dim: usize, reason: &'static str },

    /// An argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A geometric-rate fit was requested on a series with non-positive entries.
    #[error("series must be strictly positive over the fit window")]
    NonPositiveSeries,

    /// A reference solve stopped above its residual threshold.
    #[error("reference solve not converged: residual {residual:e} after {budget} iterations")]
    NotConverged { residual: f64, budget: usize },

    /// An optimizer run produced a non-finite iterate.
    #[error("non-finite iterate at iteration {k}")]
    NonFiniteIterate { k: u64 },

    /// Two redundant computation paths disagreed beyond tolerance.
    #[error("cross-check failed: {a:e} vs {b:e} differ by more than {tol:e}")]
    CrossCheck { a: f64, b: f64, tol: f64 },

    /// An experiment configuration failed validation.
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
