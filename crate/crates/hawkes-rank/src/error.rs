//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by model construction, simulation, estimation and the
/// centrality operators.
#[derive(Debug, Error)]
pub enum HawkesError {
    /// Matrix/vector dimensions do not agree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A value violates a model invariant (negative rate, non-increasing
    /// timestamps, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The branching matrix has spectral radius >= 1; the process is
    /// explosive and the requested operation is undefined.
    #[error("process not stationary: spectral radius {radius} >= 1")]
    NotStationary { radius: f64 },

    /// Katz attenuation outside the admissible interval.
    #[error("alpha {alpha} outside (0, {bound}) for this matrix")]
    AlphaOutOfRange { alpha: f64, bound: f64 },

    /// An iterative solver hit its iteration cap before reaching tolerance.
    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: String, iterations: usize },

    /// A computation produced NaN or infinity from pathological inputs.
    #[error("non-finite result in {0}")]
    NonFinite(String),

    /// Too little data for the requested estimate.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// File or serialization failure (CLI and io module).
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON input.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// Malformed CSV input.
    #[error("csv parse error at line {line}: {message}")]
    CsvParse { line: usize, message: String },
}
