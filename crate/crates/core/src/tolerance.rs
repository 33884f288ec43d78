use serde::{Deserialize, Serialize};

/// Relative tolerance used when deciding exact equalities of derived
/// floating-point quantities (zero discriminants, boundary strata, det A = 1).
pub const EQ_TOL: f64 = 1e-12;

/// Numerical tolerances shared by the dynamics, construction and
/// classification code.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Euclidean distance below which two orbit points are identified.
    pub orbit: f64,
    /// Per-dimension bound on relation residuals.
    pub relation: f64,
    /// Iterations whose coordinates exceed this magnitude are reported as
    /// overflow.
    pub magnitude_bound: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            orbit: 1e-8,
            relation: 1e-10,
            magnitude_bound: 1e12,
        }
    }
}

/// `|x| <= EQ_TOL * max(1, scale)`.
pub(crate) fn near_zero(x: f64, scale: f64) -> bool {
    x.abs() <= EQ_TOL * scale.abs().max(1.0)
}
