//! Error types shared by all modules.

use thiserror::Error;

/// Errors produced by the numerical layers.
///
/// Diagnostics that carry a best-effort value (non-convergence, truncation)
/// keep it so callers can decide whether the estimate is still usable.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: last estimate {value:e}, error bound {error_bound:e}")]
    QuadratureNonConvergence { value: f64, error_bound: f64 },

    #[error("NaN from integrand at x = {at:e}")]
    NanIntegrand { at: f64 },

    #[error("suspected multiple root near x = {near:e}")]
    Degeneracy { near: f64 },

    #[error("evaluation point too close to a branch point ({dist:e} from {point})")]
    NearBranchPoint { point: String, dist: f64 },

    #[error("parameters outside admissible region: {0}")]
    Region(String),

    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    #[error("solver did not converge after {iterations} iterations (residual {residual:e} > tol {tol:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        tol: f64,
    },

    #[error("window too small: {0}")]
    Window(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("search window exhausted: {0}")]
    SearchWindow(String),

    #[error("truncation tail too large: {0}")]
    Truncation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
