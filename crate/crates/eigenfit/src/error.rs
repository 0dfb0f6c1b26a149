//! Crate-wide error type.

use crate::measure::Measure;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("measure {0:?} is not supported by this operation")]
    UnsupportedMeasure(Measure),

    #[error("n must be at least d+1 (d = {degree}, n = {n})")]
    TooFewNodes { degree: usize, n: usize },

    #[error("design matrix is rank deficient: nodes {i} and {j} collide (t = {value:.6e})")]
    CoincidentNodes { i: usize, j: usize, value: f64 },

    #[error("design matrix is rank deficient (pivot {pivot:.3e} at column {column})")]
    RankDeficient { column: usize, pivot: f64 },

    #[error("eigenvalue iteration exceeded {0} sweeps; input is pathological")]
    EigenIterationLimit(usize),

    #[error("quadrature failed to stabilize to {tol:.1e} (best delta {delta:.3e})")]
    QuadratureNonConvergence { tol: f64, delta: f64 },

    #[error("target has zero residual; relative error is undefined")]
    ZeroResidualTarget,

    #[error("density oracle supports at most 3 nodes, got {0}")]
    OracleDimension(usize),

    #[error("invalid target specification: {0}")]
    InvalidTarget(String),

    #[error("invalid experiment configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
