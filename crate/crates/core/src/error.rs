//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate subspace")]
    DegenerateSubspace,

    #[error("rank deficiency in basis")]
    RankDeficient,

    #[error("metric not Riemannian")]
    MetricNotRiemannian,

    #[error("{func} domain violation at {value}")]
    DomainViolation { func: &'static str, value: f64 },

    #[error("outside admissible domain")]
    OutsideDomain,

    #[error("index {index} out of range (n = {n})")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("parallel focal point")]
    FocalPoint,

    #[error("focal distance")]
    FocalDistance,

    #[error("T vanishes; decomposition undefined")]
    VanishingT,

    #[error("degenerate plane")]
    DegeneratePlane,

    #[error("{0}")]
    Inadmissible(String),

    #[error("no warped solution for (c, delta)")]
    NoWarpedSolution,

    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),

    #[error("io error: {0}")]
    Io(String),
}
