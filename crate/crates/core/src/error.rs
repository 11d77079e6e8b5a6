use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("dimension mismatch: expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("flow conservation violated at vertex {vertex} by {violation:e}")]
    ConservationViolated { vertex: usize, violation: f64 },

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("resistance of edge {edge} is not a positive finite number ({value})")]
    NonPositiveResistance { edge: usize, value: f64 },

    #[error("source and sink are disconnected")]
    Disconnected,

    #[error("electrical solve did not converge: gap {gap:e} after {iterations} iterations (need {target:e})")]
    NonConvergence {
        gap: f64,
        target: f64,
        iterations: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("forbidden set bound violated: {0}")]
    ForbiddenBound(String),

    #[error("graph too large for exhaustive enumeration (n = {n}, limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("algorithm failed: {0}")]
    AlgorithmFailed(String),
}
