//! Planar affine maps, their iterates and the orbit structures that index
//! representations: periodic orbits, k-strings and one-/two-sided rays.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{AlgebraParams, RotationAngle};
use crate::tolerance::{near_zero, EQ_TOL};

pub type Point = [f64; 2];

/// `x ↦ A x + t` on ℝ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub t1: f64,
    pub t2: f64,
}

impl AffineMap2 {
    pub fn new(matrix: [[f64; 2]; 2], translation: [f64; 2]) -> Self {
        Self {
            a11: matrix[0][0],
            a12: matrix[0][1],
            a21: matrix[1][0],
            a22: matrix[1][1],
            t1: translation[0],
            t2: translation[1],
        }
    }

    pub fn identity() -> Self {
        Self::new([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0])
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.a11, self.a12], [self.a21, self.a22]]
    }

    pub fn translation(&self) -> [f64; 2] {
        [self.t1, self.t2]
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a21, self.a22, self.t1, self.t2]
            .iter()
            .all(|v| v.is_finite())
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        [
            self.a11 * p[0] + self.a12 * p[1] + self.t1,
            self.a21 * p[0] + self.a22 * p[1] + self.t2,
        ]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap2) -> AffineMap2 {
        let t = self.apply(inner.translation());
        AffineMap2 {
            a11: self.a11 * inner.a11 + self.a12 * inner.a21,
            a12: self.a11 * inner.a12 + self.a12 * inner.a22,
            a21: self.a21 * inner.a11 + self.a22 * inner.a21,
            a22: self.a21 * inner.a12 + self.a22 * inner.a22,
            t1: t[0],
            t2: t[1],
        }
    }

    pub fn inverse(&self) -> Option<AffineMap2> {
        let det = self.det();
        let scale = self
            .a11
            .abs()
            .max(self.a12.abs())
            .max(self.a21.abs())
            .max(self.a22.abs());
        if near_zero(det, scale * scale) {
            return None;
        }
        let inv = [
            [self.a22 / det, -self.a12 / det],
            [-self.a21 / det, self.a11 / det],
        ];
        let t = [
            -(inv[0][0] * self.t1 + inv[0][1] * self.t2),
            -(inv[1][0] * self.t1 + inv[1][1] * self.t2),
        ];
        Some(AffineMap2::new(inv, t))
    }

    /// n-fold composition by repeated multiplication.
    pub fn power(&self, n: usize) -> AffineMap2 {
        (0..n).fold(AffineMap2::identity(), |acc, _| self.compose(&acc))
    }

    pub fn max_abs_diff(&self, other: &AffineMap2) -> f64 {
        let a = [self.a11, self.a12, self.a21, self.a22, self.t1, self.t2];
        let b = [
            other.a11, other.a12, other.a21, other.a22, other.t1, other.t2,
        ];
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

/// `L̂` for the given algebra parameters.
pub fn lhat_from_params(params: &AlgebraParams) -> AffineMap2 {
    params.lhat()
}

pub fn distance(p: Point, q: Point) -> f64 {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

fn check_bound(p: Point, step: usize, bound: f64) -> Result<()> {
    if p[0].abs() > bound || p[1].abs() > bound || !p[0].is_finite() || !p[1].is_finite() {
        Err(Error::Overflow { step, bound })
    } else {
        Ok(())
    }
}

/// Applies `map` n times to `x0`.
pub fn iterate(map: &AffineMap2, x0: Point, n: usize, bound: f64) -> Result<Point> {
    let mut p = x0;
    for step in 1..=n {
        p = map.apply(p);
        check_bound(p, step, bound)?;
    }
    Ok(p)
}

/// `[x0, map(x0), …, mapⁿ(x0)]`.
pub fn orbit(map: &AffineMap2, x0: Point, n: usize, bound: f64) -> Result<Vec<Point>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(x0);
    let mut p = x0;
    for step in 1..=n {
        p = map.apply(p);
        check_bound(p, step, bound)?;
        out.push(p);
    }
    Ok(out)
}

/// Closed form of `L̂ⁿ`.
///
/// Generic branch: `(tr A)² ≠ 4 det A` and `tr A ≠ 1 + det A`, evaluated
/// through the eigenvalues `λ± = (tr A ± √((tr A)² − 4 det A))/2` (complex
/// when the linear part is elliptic). Parabolic branch: `det A = 1`,
/// `tr A = 2`. Anything else is [`Error::UnsupportedBranch`]; callers fall
/// back to [`AffineMap2::power`].
pub fn power_closed_form(params: &AlgebraParams, n: u32) -> Result<AffineMap2> {
    if n == 0 {
        return Err(Error::InvalidInput("power_closed_form needs n ≥ 1".into()));
    }
    let (t, q, a) = (params.tr_a, params.det_a, params.a);
    if params.is_det_one() && near_zero(t - 2.0, 2.0) {
        let nf = n as f64;
        return Ok(AffineMap2::new(
            [[1.0 + nf, -nf], [nf, 1.0 - nf]],
            [a * nf / 2.0 * (nf + 1.0), a * nf / 2.0 * (nf - 1.0)],
        ));
    }
    let disc = t * t - 4.0 * q;
    if near_zero(disc, t * t + 4.0 * q.abs()) {
        return Err(Error::UnsupportedBranch(
            "repeated eigenvalue (tr A)² = 4 det A",
        ));
    }
    if near_zero(t - 1.0 - q, t.abs() + q.abs()) {
        return Err(Error::UnsupportedBranch("eigenvalue 1 (tr A = 1 + det A)"));
    }
    let root = Complex64::new(disc, 0.0).sqrt();
    let lp = (t + root) / 2.0;
    let lm = (t - root) / 2.0;
    let n = n as i32;
    let inv = (lp - lm).inv();
    let diff = |k: i32| lp.powi(k) - lm.powi(k);
    let m11 = diff(n + 1) * inv;
    let m12 = -q * diff(n) * inv;
    let m21 = diff(n) * inv;
    let m22 = -q * diff(n - 1) * inv;
    let fp = (1.0 - lp.powi(n)) / (1.0 - lp);
    let fm = (1.0 - lm.powi(n)) / (1.0 - lm);
    let t1 = a * (lp * fp - lm * fm) * inv;
    let t2 = a * (fp - fm) * inv;
    Ok(AffineMap2::new(
        [[m11.re, m12.re], [m21.re, m22.re]],
        [t1.re, t2.re],
    ))
}

/// Fixed-point set of an affine map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FixedLocus {
    Point {
        point: Point,
    },
    Line {
        point: Point,
        direction: [f64; 2],
    },
    /// Every point is fixed (identity map).
    Plane,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenFixed {
    pub eigenvalues: [Complex64; 2],
    pub fixed: FixedLocus,
}

impl EigenFixed {
    pub fn fixed_point(&self) -> Option<Point> {
        match self.fixed {
            FixedLocus::Point { point } => Some(point),
            _ => None,
        }
    }
}

/// Eigenvalues of the linear part and the solution set of `(I − A) x = t`.
pub fn eigen_and_fixed(map: &AffineMap2) -> EigenFixed {
    let (t, d) = (map.trace(), map.det());
    let root = Complex64::new(t * t - 4.0 * d, 0.0).sqrt();
    let eigenvalues = [(t + root) / 2.0, (t - root) / 2.0];

    let m = [[1.0 - map.a11, -map.a12], [-map.a21, 1.0 - map.a22]];
    let rhs = map.translation();
    let scale = m.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let fixed = if !near_zero(det, scale * scale) {
        FixedLocus::Point {
            point: [
                (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det,
                (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det,
            ],
        }
    } else if scale <= EQ_TOL {
        if rhs.iter().all(|v| v.abs() <= EQ_TOL) {
            FixedLocus::Plane
        } else {
            FixedLocus::Empty
        }
    } else {
        // rank one: the augmented system is consistent iff all 2×2 minors vanish
        let rhs_scale = scale.max(rhs[0].abs()).max(rhs[1].abs());
        let minor1 = m[0][0] * rhs[1] - m[1][0] * rhs[0];
        let minor2 = m[0][1] * rhs[1] - m[1][1] * rhs[0];
        if near_zero(minor1, rhs_scale * rhs_scale) && near_zero(minor2, rhs_scale * rhs_scale) {
            let row = if m[0][0].hypot(m[0][1]) >= m[1][0].hypot(m[1][1]) {
                0
            } else {
                1
            };
            let (p, q, b) = (m[row][0], m[row][1], rhs[row]);
            let norm2 = p * p + q * q;
            let len = norm2.sqrt();
            FixedLocus::Line {
                point: [b * p / norm2, b * q / norm2],
                direction: [-q / len, p / len],
            }
        } else {
            FixedLocus::Empty
        }
    };
    EigenFixed { eigenvalues, fixed }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitKind {
    Loop,
    String,
    ForwardRay,
    TwoSidedWindow,
}

/// Consecutive points of an `L̂`-orbit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitSegment {
    pub points: Vec<Point>,
    pub kind: OrbitKind,
}

impl OrbitSegment {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Smallest `k ≤ nmax` with `|L̂ᵏ(x0) − x0| < tol`, together with the orbit
/// `x0, …, L̂^{k−1}(x0)`.
pub fn find_periodic_orbit(
    params: &AlgebraParams,
    x0: Point,
    nmax: usize,
    tol: f64,
) -> Option<(usize, OrbitSegment)> {
    let map = params.lhat();
    let bound = crate::Tolerances::default().magnitude_bound;
    let mut points = vec![x0];
    let mut p = x0;
    for k in 1..=nmax {
        p = map.apply(p);
        if check_bound(p, k, bound).is_err() {
            return None;
        }
        if distance(p, x0) < tol {
            return Some((
                k,
                OrbitSegment {
                    points,
                    kind: OrbitKind::Loop,
                },
            ));
        }
        points.push(p);
    }
    None
}

/// Solves the first coordinate of `L̂^{n−1}(x, 0)` for zero.
///
/// This is the start `d` of a candidate n-string `(d, 0) → … → (0, d̃)`; no
/// positivity is checked here.
pub fn kstring_start(params: &AlgebraParams, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput("string length must be ≥ 1".into()));
    }
    let power = params.lhat().power(n - 1);
    if near_zero(power.a11, power.t1.abs() + power.a12.abs()) {
        return Err(Error::SingularSystem(format!(
            "coefficient of x in the first coordinate of L̂^{}(x, 0) vanishes",
            n - 1
        )));
    }
    Ok(-power.t1 / power.a11)
}

/// Searches for an n-string of `L̂`: `(d, 0) → … → (0, d̃)` with `d, d̃ > tol`
/// and every interior point in the open positive quadrant.
pub fn find_kstring(params: &AlgebraParams, n: usize, tol: f64) -> Result<Option<OrbitSegment>> {
    if !params.is_invertible() {
        return Err(Error::InvalidInput(
            "k-string search needs det A ≠ 0".into(),
        ));
    }
    let x = kstring_start(params, n)?;
    if !(x > tol) {
        return Ok(None);
    }
    let map = params.lhat();
    let mut points = match orbit(
        &map,
        [x, 0.0],
        n - 1,
        crate::Tolerances::default().magnitude_bound,
    ) {
        Ok(points) => points,
        Err(_) => return Ok(None),
    };
    let interior_ok = points[1..n - 1].iter().all(|p| p[0] > tol && p[1] > tol);
    let last = points[n - 1];
    let scale = points
        .iter()
        .flatten()
        .fold(1.0f64, |acc, v| acc.max(v.abs()));
    if !interior_ok || !(last[1] > tol) || last[0].abs() > 1e-8 * scale {
        return Ok(None);
    }
    points[n - 1][0] = 0.0;
    Ok(Some(OrbitSegment {
        points,
        kind: OrbitKind::String,
    }))
}

/// Which branch of the hyperbolic parametrization of the constraint curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Upper,
    Lower,
}

/// `x⃗₁(β)` / `x⃗₂(β)` for `det A = 1`, `tr A = 2cosh 2θ > 2`, `ĉ > 0`:
///
/// ```text
/// x⃗(β) = (μ ± √ĉ cosh β / cosh θ, μ ± √ĉ cosh(β − 2θ) / cosh θ)
/// ```
///
/// satisfying `L̂(x⃗(β)) = x⃗(β + 2θ)`.
pub fn hyperbolic_parametrization(
    params: &AlgebraParams,
    beta: f64,
    branch: Branch,
) -> Result<Point> {
    let theta = match params.rotation_angle() {
        Some(RotationAngle::Hyperbolic(theta)) => theta,
        _ => return Err(Error::DomainError("needs det A = 1 and tr A > 2".into())),
    };
    let (mu, chat) = mu_chat(params)?;
    let k = chat.sqrt() / theta.cosh();
    let sign = match branch {
        Branch::Upper => 1.0,
        Branch::Lower => -1.0,
    };
    Ok([
        mu + sign * k * beta.cosh(),
        mu + sign * k * (beta - 2.0 * theta).cosh(),
    ])
}

/// Rotation of the constraint ellipse for `det A = 1`, `tr A = 2cos 2θ`,
/// `ĉ > 0`: `x⃗(β) = (μ + √ĉ cos β / cos θ, μ + √ĉ cos(β − 2θ) / cos θ)`.
pub fn elliptic_parametrization(params: &AlgebraParams, beta: f64) -> Result<Point> {
    let theta = match params.rotation_angle() {
        Some(RotationAngle::Elliptic(theta)) => theta,
        _ => return Err(Error::DomainError("needs det A = 1 and |tr A| < 2".into())),
    };
    let (mu, chat) = mu_chat(params)?;
    let k = chat.sqrt() / theta.cos();
    Ok([mu + k * beta.cos(), mu + k * (beta - 2.0 * theta).cos()])
}

fn mu_chat(params: &AlgebraParams) -> Result<(f64, f64)> {
    let mu = params
        .mu()
        .ok_or_else(|| Error::DomainError("Δ = 0".into()))?;
    let chat = params
        .chat()
        .ok_or_else(|| Error::DomainError("ĉ₁ is not set".into()))?;
    if !(chat > 0.0) {
        return Err(Error::DomainError(format!("needs ĉ > 0, got {chat}")));
    }
    Ok((mu, chat))
}

/// Fate of an orbit followed inside the open positive quadrant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum RayFate {
    /// The orbit leaves the open quadrant at this step.
    Escapes { step: usize },
    /// Coordinates grow past the divergence radius while staying positive.
    Diverges { step: usize },
    /// Successive points settle on a fixed point of the closed quadrant.
    Converges { step: usize },
    /// Still inside after the step budget.
    Persists { steps: usize },
}

impl RayFate {
    pub fn survives(&self) -> bool {
        !matches!(self, RayFate::Escapes { .. })
    }
}

pub const RAY_STEP_BUDGET: usize = 20_000;
const DIVERGENCE_RADIUS: f64 = 1e9;

/// Follows `map` from `start` (which itself may lie on an axis) and reports
/// whether the orbit stays in the open positive quadrant.
pub fn follow_ray(map: &AffineMap2, start: Point, budget: usize) -> RayFate {
    let mut p = start;
    for step in 1..=budget {
        let next = map.apply(p);
        if !(next[0] > 0.0 && next[1] > 0.0) {
            return RayFate::Escapes { step };
        }
        if next[0] > DIVERGENCE_RADIUS || next[1] > DIVERGENCE_RADIUS {
            return RayFate::Diverges { step };
        }
        if distance(next, p) <= 1e-13 * (1.0 + next[0].abs() + next[1].abs()) {
            return RayFate::Converges { step };
        }
        p = next;
    }
    RayFate::Persists { steps: budget }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Point, b: Point, tol: f64) -> bool {
        distance(a, b) <= tol
    }

    #[test]
    fn lhat_zero_parameters() {
        let map = AlgebraParams::new(0.0, 0.0, 0.0).lhat();
        assert_eq!(map.matrix(), [[0.0, -0.0], [1.0, 0.0]]);
        assert_eq!(map.translation(), [0.0, 0.0]);
    }

    #[test]
    fn lhat_eleven_dim_example() {
        let map = AlgebraParams::new(2.0 * (2.0 * PI / 11.0).cos(), 1.0, 0.5).lhat();
        assert!((map.a11 - 1.682_507_065_662_362).abs() < 1e-12);
        assert_eq!((map.a12, map.a21, map.a22), (-1.0, 1.0, 0.0));
        assert_eq!(map.translation(), [0.5, 0.0]);
    }

    #[test]
    fn lhat_parabolic_zero_translation() {
        let map = AlgebraParams::new(2.0, 1.0, 0.0).lhat();
        assert_eq!(map.matrix(), [[2.0, -1.0], [1.0, 0.0]]);
        assert_eq!(map.translation(), [0.0, 0.0]);
    }

    #[test]
    fn iterate_identity_and_zero_steps() {
        let id = AffineMap2::identity();
        assert_eq!(iterate(&id, [3.0, 7.0], 5, 1e12).unwrap(), [3.0, 7.0]);
        let map = AlgebraParams::new(3.0, 1.0, 1.0).lhat();
        assert_eq!(iterate(&map, [0.25, -1.5], 0, 1e12).unwrap(), [0.25, -1.5]);
    }

    #[test]
    fn iterate_one_sided_example_step() {
        let map = AlgebraParams::new(2.09 / 0.955, 1.0, 0.18 / 0.955).lhat();
        let p = iterate(&map, [0.16574, 0.0], 1, 1e12).unwrap();
        assert!(close(p, [0.55121, 0.16574], 1e-5), "{p:?}");
    }

    #[test]
    fn iterate_reports_overflow() {
        let map = AlgebraParams::new(10.0, 1.0, 0.0).lhat();
        let err = iterate(&map, [1.0, 0.0], 100, 1e12).unwrap_err();
        assert!(matches!(err, Error::Overflow { .. }));
    }

    #[test]
    fn parabolic_power_small_n() {
        let map = power_closed_form(&AlgebraParams::new(2.0, 1.0, 2.0), 3).unwrap();
        assert_eq!(map.matrix(), [[4.0, -3.0], [3.0, -2.0]]);
        assert_eq!(map.translation(), [12.0, 6.0]);
    }

    #[test]
    fn closed_form_rejects_repeated_eigenvalue() {
        // (tr A)² = 4 det A with det A ≠ 1
        let err = power_closed_form(&AlgebraParams::new(4.0, 4.0, 1.0), 3).unwrap_err();
        assert!(matches!(err, Error::UnsupportedBranch(_)));
        let err = power_closed_form(&AlgebraParams::new(2.5, 1.5, 1.0), 3).unwrap_err();
        assert!(matches!(err, Error::UnsupportedBranch(_)));
    }

    #[test]
    fn hyperbolic_power_matches_composition() {
        let params = AlgebraParams::hyperbolic(0.5, 1.0);
        let closed = power_closed_form(&params, 2).unwrap();
        let brute = params.lhat().power(2);
        assert!(closed.max_abs_diff(&brute) < 1e-9);
    }

    #[test]
    fn elliptic_fixed_point_is_mu() {
        let params = AlgebraParams::elliptic(PI / 11.0, 0.5);
        let ef = eigen_and_fixed(&params.lhat());
        for ev in ef.eigenvalues {
            assert!((ev.norm() - 1.0).abs() < 1e-12);
            assert!(ev.im.abs() > 0.1);
        }
        let fp = ef.fixed_point().unwrap();
        let mu = 0.5 / (2.0 - params.tr_a);
        assert!((mu - 1.574_8).abs() < 1e-4);
        assert!(close(fp, [mu, mu], 1e-12));
    }

    #[test]
    fn identity_fixes_plane() {
        assert_eq!(
            eigen_and_fixed(&AffineMap2::identity()).fixed,
            FixedLocus::Plane
        );
    }

    #[test]
    fn parabolic_with_translation_has_no_fixed_point() {
        let ef = eigen_and_fixed(&AlgebraParams::new(2.0, 1.0, 0.3).lhat());
        assert_eq!(ef.fixed, FixedLocus::Empty);
        let ef = eigen_and_fixed(&AlgebraParams::new(2.0, 1.0, 0.0).lhat());
        match ef.fixed {
            FixedLocus::Line { point, direction } => {
                // the diagonal r = s
                assert!((direction[0].abs() - direction[1].abs()).abs() < 1e-12);
                assert!((point[0] - point[1]).abs() < 1e-12);
            }
            other => panic!("expected a line, got {other:?}"),
        }
    }

    #[test]
    fn periodic_orbit_of_eleven_dim_example() {
        let params = AlgebraParams::elliptic(PI / 11.0, 0.5)
            .with_chat(1.0)
            .unwrap();
        let x0 = elliptic_parametrization(&params, -1.585).unwrap();
        let (period, seg) = find_periodic_orbit(&params, x0, 20, 1e-8).unwrap();
        assert_eq!(period, 11);
        assert_eq!(seg.len(), 11);
    }

    #[test]
    fn fixed_point_has_period_one() {
        let params = AlgebraParams::elliptic(0.3, 0.7);
        let fp = eigen_and_fixed(&params.lhat()).fixed_point().unwrap();
        assert_eq!(find_periodic_orbit(&params, fp, 5, 1e-8).unwrap().0, 1);
    }

    #[test]
    fn hyperbolic_regime_has_no_periods() {
        let params = AlgebraParams::new(3.0, 1.0, 0.4);
        assert!(find_periodic_orbit(&params, [0.3, 2.0], 50, 1e-8).is_none());
    }

    #[test]
    fn one_string_is_absent() {
        let params = AlgebraParams::hyperbolic(0.4, -0.3);
        assert!(find_kstring(&params, 1, 1e-8).unwrap().is_none());
    }

    #[test]
    fn hyperbolic_three_string_closed_form() {
        let (theta, mu) = (0.35, 1.2);
        let params = AlgebraParams::hyperbolic(theta, mu * (2.0 - 2.0 * (2.0 * theta).cosh()));
        let expected = 2.0 * mu * theta.sinh() * (2.0 * theta).sinh() / (3.0 * theta).cosh();
        let seg = find_kstring(&params, 3, 1e-8).unwrap().unwrap();
        assert!((seg.points[0][0] - expected).abs() < 1e-9 * expected);
        assert_eq!(seg.points[0][1], 0.0);
        assert_eq!(seg.points[2][0], 0.0);
        assert!((seg.points[2][1] - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn no_string_for_nonnegative_a_hyperbolic() {
        let params = AlgebraParams::new(2.7, 1.0, 0.2);
        for n in 1..15 {
            assert!(find_kstring(&params, n, 1e-8).unwrap().is_none());
        }
    }

    #[test]
    fn hyperbolic_parametrization_symmetric_point() {
        let theta = 0.3;
        let params = AlgebraParams::hyperbolic(theta, -0.5)
            .with_chat(2.0)
            .unwrap();
        let mu = params.mu().unwrap();
        let p = hyperbolic_parametrization(&params, theta, Branch::Upper).unwrap();
        let expected = mu + 2f64.sqrt();
        assert!(close(p, [expected, expected], 1e-12));
    }

    #[test]
    fn hyperbolic_parametrization_shift() {
        let theta = 0.3;
        let params = AlgebraParams::hyperbolic(theta, 1.0 * (2.0 - 2.0 * 0.6f64.cosh()))
            .with_chat(0.25)
            .unwrap();
        assert!((params.mu().unwrap() - 1.0).abs() < 1e-12);
        for branch in [Branch::Upper, Branch::Lower] {
            let p0 = hyperbolic_parametrization(&params, 0.0, branch).unwrap();
            let p1 = hyperbolic_parametrization(&params, 2.0 * theta, branch).unwrap();
            assert!(close(params.lhat().apply(p0), p1, 1e-9));
        }
    }

    #[test]
    fn parametrization_domain_errors() {
        let elliptic = AlgebraParams::elliptic(0.3, 1.0).with_chat(1.0).unwrap();
        assert!(matches!(
            hyperbolic_parametrization(&elliptic, 0.0, Branch::Upper),
            Err(Error::DomainError(_))
        ));
        let negative = AlgebraParams::hyperbolic(0.3, 1.0).with_chat(-1.0).unwrap();
        assert!(hyperbolic_parametrization(&negative, 0.0, Branch::Upper).is_err());
        assert!(elliptic_parametrization(&AlgebraParams::elliptic(0.3, 1.0), 0.0).is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let map = AlgebraParams::new(2.3, 1.0, 0.4).lhat();
        let inv = map.inverse().unwrap();
        let p = [0.7, -1.1];
        assert!(close(inv.apply(map.apply(p)), p, 1e-14));
        assert!(AlgebraParams::new(1.0, 0.0, 0.0).lhat().inverse().is_none());
    }
}
