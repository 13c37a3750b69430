use thiserror::Error;

/// Errors shared across the solver, prox, and fixed-point modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} is {left_rows}x{left_cols}, {right} is {right_rows}x{right_cols}")]
    DimensionMismatch {
        left: &'static str,
        left_rows: usize,
        left_cols: usize,
        right: &'static str,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("problem validation failed: {0}")]
    InvalidProblem(String),

    #[error("{name} must be strictly positive, got {value}")]
    NotPositive { name: &'static str, value: f64 },

    #[error("{name} must be nonzero")]
    Zero { name: &'static str },

    #[error("metric entry {index} is not positive: {value}")]
    NegativeMetricEntry { index: usize, value: f64 },

    #[error("{name} is rank deficient (tolerance 1e-10 relative to largest singular value)")]
    RankDeficient { name: &'static str },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("fixed-point map appears non-averaged: step norms grew for 3 consecutive iterations (at iteration {iteration}, step norm {step_norm:.3e})")]
    NonAveragedMap { iteration: usize, step_norm: f64 },

    #[error("did not converge within {iterations} iterations (last residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("trace length mismatch: {left} vs {right}")]
    TraceLengthMismatch { left: usize, right: usize },

    #[error("averagedness parameter theta must lie in (0,1), got {0}")]
    ThetaOutOfRange(f64),

    #[error("linear system is singular: {0}")]
    SingularSystem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
