use serde::{Deserialize, Serialize};

use crate::dynamics::AffineMap2;
use crate::error::{Error, Result};
use crate::tolerance::near_zero;

/// Parameters `(tr A, det A, a)` of the algebra `C_{L,a}`, optionally with the
/// value `ĉ₁` of the Casimir in an irreducible representation
/// (`φ(Ĉ) = 4ĉ₁·I`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraParams {
    #[serde(rename = "trA")]
    pub tr_a: f64,
    #[serde(rename = "detA")]
    pub det_a: f64,
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chat1: Option<f64>,
}

/// Angle θ with `tr A = 2cos 2θ` (elliptic) or `tr A = 2cosh 2θ` (hyperbolic),
/// defined when `det A = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RotationAngle {
    Elliptic(f64),
    Hyperbolic(f64),
    Parabolic,
}

impl AlgebraParams {
    pub fn new(tr_a: f64, det_a: f64, a: f64) -> Self {
        Self {
            tr_a,
            det_a,
            a,
            chat1: None,
        }
    }

    pub fn with_chat1(mut self, chat1: f64) -> Self {
        self.chat1 = Some(chat1);
        self
    }

    /// Fixes the Casimir through `ĉ = μ² + ĉ₁/Δ`.
    pub fn with_chat(self, chat: f64) -> Result<Self> {
        let mu = self
            .mu()
            .ok_or_else(|| Error::DomainError("ĉ is undefined when Δ = 0".into()))?;
        Ok(self.with_chat1(self.delta() * (chat - mu * mu)))
    }

    /// Elliptic parameters with `tr A = 2cos 2θ`, `det A = 1`.
    pub fn elliptic(theta: f64, a: f64) -> Self {
        Self::new(2.0 * (2.0 * theta).cos(), 1.0, a)
    }

    /// Hyperbolic parameters with `tr A = 2cosh 2θ`, `det A = 1`.
    pub fn hyperbolic(theta: f64, a: f64) -> Self {
        Self::new(2.0 * (2.0 * theta).cosh(), 1.0, a)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.tr_a, self.det_a, self.a]
            .iter()
            .chain(self.chat1.iter())
            .all(|v| v.is_finite());
        if finite {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "algebra parameters must be finite".into(),
            ))
        }
    }

    /// `Δ = 1 + det A − tr A`; equals `2 − tr A` when `det A = 1`.
    pub fn delta(&self) -> f64 {
        1.0 + self.det_a - self.tr_a
    }

    pub fn delta_is_zero(&self) -> bool {
        near_zero(self.delta(), self.tr_a.abs().max(self.det_a.abs()))
    }

    pub fn is_det_one(&self) -> bool {
        near_zero(self.det_a - 1.0, 1.0)
    }

    pub fn is_invertible(&self) -> bool {
        !near_zero(self.det_a, 1.0)
    }

    /// `μ = a/Δ`, the centre coordinate of the constraint curve.
    pub fn mu(&self) -> Option<f64> {
        (!self.delta_is_zero()).then(|| self.a / self.delta())
    }

    /// `ĉ = μ² + ĉ₁/Δ`.
    pub fn chat(&self) -> Option<f64> {
        let mu = self.mu()?;
        Some(mu * mu + self.chat1? / self.delta())
    }

    pub fn rotation_angle(&self) -> Option<RotationAngle> {
        if !self.is_det_one() {
            return None;
        }
        let half = self.tr_a / 2.0;
        if near_zero(self.tr_a - 2.0, 2.0) {
            Some(RotationAngle::Parabolic)
        } else if half.abs() < 1.0 {
            Some(RotationAngle::Elliptic(half.acos() / 2.0))
        } else if half > 1.0 {
            Some(RotationAngle::Hyperbolic(half.acosh() / 2.0))
        } else {
            None
        }
    }

    /// The affine map `L̂(x, y) = ((tr A) x − (det A) y + a, x)`.
    pub fn lhat(&self) -> AffineMap2 {
        AffineMap2::new([[self.tr_a, -self.det_a], [1.0, 0.0]], [self.a, 0.0])
    }
}
