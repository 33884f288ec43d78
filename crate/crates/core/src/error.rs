use thiserror::Error;

use crate::dynamics::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("coordinate magnitude exceeded {bound:e} at step {step}")]
    Overflow { step: usize, bound: f64 },

    #[error("no closed form for this parameter branch: {0}")]
    UnsupportedBranch(&'static str),

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("constraint curve is empty")]
    EmptyCurve,

    #[error("degenerate ordering: 1 + 2ħ²δ̃₁ = {denominator:e}")]
    DegenerateOrdering { denominator: f64 },

    #[error("inconsistent ψ system: {0}")]
    Inconsistent(String),

    #[error("start point is not periodic: |L̂^{period}(x) − x| = {distance:e}{note}")]
    NotPeriodic {
        period: usize,
        distance: f64,
        note: String,
    },

    #[error("orbit leaves the open positive quadrant at index {index}: ({}, {})", .point[0], .point[1])]
    OrbitLeavesPositiveQuadrant { index: i64, point: Point },

    #[error("no {n}-string: {reason}")]
    NoString { n: usize, reason: String },

    #[error("L̂ is not invertible (det A = 0)")]
    NotInvertible,

    #[error("unsupported Casimir case: {0}")]
    UnsupportedCase(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("corner block given but the base point is not periodic of order {order}")]
    CornerWithoutPeriodicity { order: usize },

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
}
