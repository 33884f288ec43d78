//! Matrix representations of `C_{L,a}`: loops, strings, truncated one- and
//! two-sided windows, scalars; relation checks, the Casimir and the
//! `X, Y, Z` form.
//!
//! In every construction `W` is upper bidiagonal with `W_{i,i+1} = √dᵢ`, so
//! `D = WV` and `D̃ = VW` are diagonal with `(dᵢ, d̃ᵢ)` running along an orbit
//! of `L̂`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{distance, AffineMap2, OrbitKind, OrbitSegment, Point};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::params::AlgebraParams;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepKind {
    Loop,
    String,
    OneSidedTruncated,
    TwoSidedTruncated,
    Scalar,
}

impl RepKind {
    pub fn is_truncated(&self) -> bool {
        matches!(
            self,
            RepKind::OneSidedTruncated | RepKind::TwoSidedTruncated
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub kind: RepKind,
    pub beta: f64,
    pub w: CMatrix,
    pub orbit: OrbitSegment,
    pub params: AlgebraParams,
    /// Basis indices where a truncated window cuts the infinite matrix.
    pub boundary: Vec<usize>,
    /// Orbit indices whose slightly negative coordinates were set to zero.
    pub clamped: Vec<usize>,
}

impl Representation {
    /// Wraps an externally supplied matrix.
    pub fn from_parts(
        kind: RepKind,
        params: AlgebraParams,
        w: CMatrix,
        beta: f64,
        orbit: OrbitSegment,
        boundary: Vec<usize>,
    ) -> Result<Self> {
        if w.nrows() != w.ncols() || w.nrows() == 0 {
            return Err(Error::ShapeMismatch(format!(
                "W must be square and non-empty, got {}×{}",
                w.nrows(),
                w.ncols()
            )));
        }
        if let Some(bad) = boundary.iter().find(|&&i| i >= w.nrows()) {
            return Err(Error::ShapeMismatch(format!(
                "boundary index {bad} out of range"
            )));
        }
        Ok(Self {
            kind,
            beta,
            w,
            orbit,
            params,
            boundary,
            clamped: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn v(&self) -> CMatrix {
        self.w.adjoint()
    }

    /// `D = WV`.
    pub fn d(&self) -> CMatrix {
        &self.w * self.v()
    }

    /// `D̃ = VW`.
    pub fn dt(&self) -> CMatrix {
        self.v() * &self.w
    }

    /// Moduli `|W_{i,i+1}|`.
    pub fn superdiagonal(&self) -> Vec<f64> {
        (0..self.dim().saturating_sub(1))
            .map(|i| self.w[(i, i + 1)].norm())
            .collect()
    }

    /// `W_{n−1,0}` for loops of dimension `n ≥ 2`.
    pub fn corner(&self) -> Option<Complex64> {
        (self.kind == RepKind::Loop && self.dim() >= 2).then(|| self.w[(self.dim() - 1, 0)])
    }

    /// Sorted eigenvalues of `D`; distinct spectra witness inequivalence.
    pub fn d_spectrum(&self) -> Vec<f64> {
        let mut values = linalg::diagonal_re(&self.d());
        values.sort_by(f64::total_cmp);
        values
    }

    fn interior(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|i| !self.boundary.contains(i))
            .collect()
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `√d` per orbit point, clamping values in `[−tol, 0)` to zero.
fn checked_sqrt(
    value: f64,
    index: usize,
    offset: i64,
    point: Point,
    tol: f64,
    clamped: &mut Vec<usize>,
) -> Result<f64> {
    if value >= 0.0 {
        Ok(value.sqrt())
    } else if value >= -tol {
        clamped.push(index);
        Ok(0.0)
    } else {
        Err(Error::OrbitLeavesPositiveQuadrant {
            index: index as i64 + offset,
            point,
        })
    }
}

fn bidiagonal(weights: &[f64], dim: usize) -> CMatrix {
    let mut w = linalg::zeros(dim);
    for (i, s) in weights.iter().enumerate() {
        w[(i, i + 1)] = real(*s);
    }
    w
}

fn params_for_build(params: &AlgebraParams) -> Result<AffineMap2> {
    params.validate()?;
    Ok(params.lhat())
}

/// Loop representation over the periodic orbit through `x1`:
/// `W_{i,i+1} = √dᵢ`, corner `W_{n−1,0} = e^{iβ}√d_{n−1}`.
pub fn build_loop(
    params: &AlgebraParams,
    x1: Point,
    n: usize,
    beta: f64,
    tol: &Tolerances,
) -> Result<Representation> {
    if n == 0 {
        return Err(Error::InvalidInput("loop length must be ≥ 1".into()));
    }
    let map = params_for_build(params)?;
    let mut points = Vec::with_capacity(n);
    let mut p = x1;
    for _ in 0..n {
        points.push(p);
        p = map.apply(p);
    }
    let gap = distance(p, x1);
    if !(gap < tol.orbit) {
        return Err(Error::NotPeriodic {
            period: n,
            distance: gap,
            note: String::new(),
        });
    }
    for (i, q) in points.iter().enumerate() {
        if !(q[0] > 0.0 && q[1] > 0.0) {
            return Err(Error::OrbitLeavesPositiveQuadrant {
                index: i as i64,
                point: *q,
            });
        }
    }
    let roots: Vec<f64> = points.iter().map(|q| q[0].sqrt()).collect();
    let mut w = bidiagonal(&roots[..n - 1], n);
    w[(n - 1, 0)] += Complex64::from_polar(roots[n - 1], beta);
    Ok(Representation {
        kind: if n == 1 {
            RepKind::Scalar
        } else {
            RepKind::Loop
        },
        beta,
        w,
        orbit: OrbitSegment {
            points,
            kind: OrbitKind::Loop,
        },
        params: *params,
        boundary: Vec::new(),
        clamped: Vec::new(),
    })
}

/// One-dimensional representation `W = e^{iβ}√d` at a fixed point `(d, d)`.
pub fn build_scalar(
    params: &AlgebraParams,
    d: f64,
    beta: f64,
    tol: &Tolerances,
) -> Result<Representation> {
    let map = params_for_build(params)?;
    let image = map.apply([d, d]);
    let gap = distance(image, [d, d]);
    // W = 0 satisfies both relations whatever L̂ does
    if d != 0.0 && !(gap < tol.orbit) {
        return Err(Error::NotPeriodic {
            period: 1,
            distance: gap,
            note: " ((d, d) is not a fix-point of L̂)".into(),
        });
    }
    let mut clamped = Vec::new();
    let root = checked_sqrt(d, 0, 0, [d, d], tol.orbit, &mut clamped)?;
    let mut w = linalg::zeros(1);
    w[(0, 0)] = Complex64::from_polar(root, beta);
    Ok(Representation {
        kind: RepKind::Scalar,
        beta,
        w,
        orbit: OrbitSegment {
            points: vec![[d.max(0.0), d.max(0.0)]],
            kind: OrbitKind::Loop,
        },
        params: *params,
        boundary: Vec::new(),
        clamped,
    })
}

/// String representation over the n-string of `L̂`.
pub fn build_string(params: &AlgebraParams, n: usize, tol: &Tolerances) -> Result<Representation> {
    params_for_build(params)?;
    if n < 2 {
        return Err(Error::NoString {
            n,
            reason: "a 1-string forces d = d̃ = 0".into(),
        });
    }
    let segment =
        crate::dynamics::find_kstring(params, n, tol.orbit)?.ok_or_else(|| Error::NoString {
            n,
            reason: "no x, y > 0 with L̂^{n−1}(x, 0) = (0, y) and a positive interior".into(),
        })?;
    let roots: Vec<f64> = segment.points[..n - 1]
        .iter()
        .map(|q| q[0].sqrt())
        .collect();
    Ok(Representation {
        kind: RepKind::String,
        beta: 0.0,
        w: bidiagonal(&roots, n),
        orbit: segment,
        params: *params,
        boundary: Vec::new(),
        clamped: Vec::new(),
    })
}

/// `N + 1` leading rows of the one-sided representation seeded at `(d0, 0)`.
pub fn build_one_sided(
    params: &AlgebraParams,
    d0: f64,
    big_n: usize,
    tol: &Tolerances,
) -> Result<Representation> {
    let map = params_for_build(params)?;
    if !(d0 > 0.0) {
        return Err(Error::InvalidInput("one-sided seed needs d0 > 0".into()));
    }
    let points = walk(&map, [d0, 0.0], big_n, 0, tol)?;
    let mut clamped = Vec::new();
    let roots = points[..big_n]
        .iter()
        .enumerate()
        .map(|(i, q)| checked_sqrt(q[0], i, 0, *q, tol.orbit, &mut clamped))
        .collect::<Result<Vec<_>>>()?;
    Ok(Representation {
        kind: RepKind::OneSidedTruncated,
        beta: 0.0,
        w: bidiagonal(&roots, big_n + 1),
        orbit: OrbitSegment {
            points,
            kind: OrbitKind::ForwardRay,
        },
        params: *params,
        boundary: vec![big_n],
        clamped,
    })
}

/// Mirror image of [`build_one_sided`]: the orbit ends at the receiver
/// `(0, s0)` and extends backwards; the window keeps its last `N + 1` rows.
pub fn build_one_sided_reversed(
    params: &AlgebraParams,
    s0: f64,
    big_n: usize,
    tol: &Tolerances,
) -> Result<Representation> {
    let map = params_for_build(params)?;
    let inverse = map.inverse().ok_or(Error::NotInvertible)?;
    if !(s0 > 0.0) {
        return Err(Error::InvalidInput(
            "reversed one-sided seed needs s0 > 0".into(),
        ));
    }
    let mut points = walk(&inverse, [0.0, s0], big_n, 0, tol).map_err(negate_index)?;
    points.reverse();
    let offset = -(big_n as i64);
    let mut clamped = Vec::new();
    let roots = points[..big_n]
        .iter()
        .enumerate()
        .map(|(i, q)| checked_sqrt(q[0], i, offset, *q, tol.orbit, &mut clamped))
        .collect::<Result<Vec<_>>>()?;
    Ok(Representation {
        kind: RepKind::OneSidedTruncated,
        beta: 0.0,
        w: bidiagonal(&roots, big_n + 1),
        orbit: OrbitSegment {
            points,
            kind: OrbitKind::ForwardRay,
        },
        params: *params,
        boundary: vec![0],
        clamped,
    })
}

/// `(2N + 1)`-dimensional window of the two-sided representation centred
/// on `x0`.
pub fn build_two_sided(
    params: &AlgebraParams,
    x0: Point,
    big_n: usize,
    tol: &Tolerances,
) -> Result<Representation> {
    let map = params_for_build(params)?;
    let inverse = map.inverse().ok_or(Error::NotInvertible)?;
    if !(x0[0] > 0.0 && x0[1] > 0.0) {
        return Err(Error::OrbitLeavesPositiveQuadrant {
            index: 0,
            point: x0,
        });
    }
    let forward = walk(&map, x0, big_n, 0, tol)?;
    let mut backward = walk(&inverse, x0, big_n, 0, tol).map_err(negate_index)?;
    backward.reverse();
    backward.pop();
    let points: Vec<Point> = backward.into_iter().chain(forward).collect();
    let dim = 2 * big_n + 1;
    let roots: Vec<f64> = points[..dim - 1].iter().map(|q| q[0].sqrt()).collect();
    let boundary = if dim == 1 { vec![0] } else { vec![0, dim - 1] };
    Ok(Representation {
        kind: RepKind::TwoSidedTruncated,
        beta: 0.0,
        w: bidiagonal(&roots, dim),
        orbit: OrbitSegment {
            points,
            kind: OrbitKind::TwoSidedWindow,
        },
        params: *params,
        boundary,
        clamped: Vec::new(),
    })
}

fn negate_index(err: Error) -> Error {
    match err {
        Error::OrbitLeavesPositiveQuadrant { index, point } => Error::OrbitLeavesPositiveQuadrant {
            index: -index,
            point,
        },
        other => other,
    }
}

/// `start, f(start), …, fᴺ(start)`, each image required to lie in the open
/// positive quadrant.
fn walk(
    f: &AffineMap2,
    start: Point,
    steps: usize,
    offset: i64,
    tol: &Tolerances,
) -> Result<Vec<Point>> {
    let mut points = Vec::with_capacity(steps + 1);
    points.push(start);
    let mut p = start;
    for k in 1..=steps {
        p = f.apply(p);
        if !(p[0] > 0.0 && p[1] > 0.0) {
            return Err(Error::OrbitLeavesPositiveQuadrant {
                index: k as i64 + offset,
                point: p,
            });
        }
        if p[0] > tol.magnitude_bound || p[1] > tol.magnitude_bound {
            return Err(Error::Overflow {
                step: k,
                bound: tol.magnitude_bound,
            });
        }
        points.push(p);
    }
    Ok(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResiduals {
    pub residual_cdef1: f64,
    pub residual_cdef2: f64,
    pub residual_commute_ddt: f64,
    pub residual_dw_wdt: f64,
}

/// Max-entry residuals of the defining relations. For truncated windows the
/// entries in boundary rows and columns are reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub dim: usize,
    pub residual_cdef1: f64,
    pub residual_cdef2: f64,
    pub residual_commute_ddt: f64,
    pub residual_dw_wdt: f64,
    /// Largest deviation of `(D, D̃)` from the recorded orbit.
    #[serde(default)]
    pub orbit_residual: Option<f64>,
    #[serde(default)]
    pub casimir_value: Option<f64>,
    #[serde(default)]
    pub casimir_residual: Option<f64>,
    #[serde(default)]
    pub boundary: Option<BoundaryResiduals>,
}

impl RelationReport {
    pub fn max_interior(&self) -> f64 {
        [
            self.residual_cdef1,
            self.residual_cdef2,
            self.residual_commute_ddt,
            self.residual_dw_wdt,
        ]
        .into_iter()
        .chain(self.orbit_residual)
        .fold(0.0, f64::max)
    }

    /// All interior residuals at most `tol · dim`.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_interior() <= tol * self.dim as f64
    }
}

pub fn verify_relations(rep: &Representation) -> RelationReport {
    let p = &rep.params;
    let w = &rep.w;
    let v = rep.v();
    let d = w * &v;
    let dt = &v * w;
    let ww = w * w;
    let vv = &v * &v;
    let r1 = &ww * &v - linalg::scaled(w, p.a) + linalg::scaled(&(&v * &ww), p.det_a)
        - linalg::scaled(&(w * &v * w), p.tr_a);
    let r2 = w * &vv - linalg::scaled(&v, p.a) + linalg::scaled(&(&vv * w), p.det_a)
        - linalg::scaled(&(&v * w * &v), p.tr_a);
    let r3 = linalg::commutator(&d, &dt);
    let r4 = &d * w - w * &dt;
    let mask = &rep.boundary;
    let (c1, b1) = linalg::max_abs_split(&r1, mask);
    let (c2, b2) = linalg::max_abs_split(&r2, mask);
    let (c3, b3) = linalg::max_abs_split(&r3, mask);
    let (c4, b4) = linalg::max_abs_split(&r4, mask);

    let orbit_residual = (rep.orbit.points.len() == rep.dim()).then(|| {
        rep.interior()
            .into_iter()
            .map(|i| {
                let q = rep.orbit.points[i];
                (d[(i, i)].re - q[0])
                    .abs()
                    .max((dt[(i, i)].re - q[1]).abs())
            })
            .fold(0.0, f64::max)
    });

    let (casimir_value, casimir_residual) = match casimir(rep) {
        Ok(c) if c.chat1.is_some() => (c.mean, Some(c.spread.max(c.commutator_residual))),
        _ => (None, None),
    };

    RelationReport {
        dim: rep.dim(),
        residual_cdef1: c1,
        residual_cdef2: c2,
        residual_commute_ddt: c3,
        residual_dw_wdt: c4,
        orbit_residual,
        casimir_value,
        casimir_residual,
        boundary: (!mask.is_empty()).then_some(BoundaryResiduals {
            residual_cdef1: b1,
            residual_cdef2: b2,
            residual_commute_ddt: b3,
            residual_dw_wdt: b4,
        }),
    }
}

/// `r(D+D̃) + s(D+D̃)² + t(D−D̃)²`.
pub fn casimir_rst(d: &CMatrix, dt: &CMatrix, r: f64, s: f64, t: f64) -> CMatrix {
    let sum = d + dt;
    let diff = d - dt;
    linalg::scaled(&sum, r)
        + linalg::scaled(&(&sum * &sum), s)
        + linalg::scaled(&(&diff * &diff), t)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CasimirReport {
    pub matrix_diagonal: Vec<f64>,
    /// `ĉ₁ = mean/4` when the interior diagonal is constant.
    pub chat1: Option<f64>,
    pub mean: Option<f64>,
    pub proportional: bool,
    /// `max − min` of the interior diagonal.
    pub spread: f64,
    /// Largest interior entry of `[Ĉ, W]` over the checked coefficient sets.
    pub commutator_residual: f64,
}

/// Evaluates the Casimir `Ĉ = −4a(D+D̃) + (2−tr A)(D+D̃)² + (2+tr A)(D−D̃)²`
/// when `det A = 1`. For `det A = −1, tr A = 0, a = 0` every
/// `r(D+D̃) + s(D+D̃)² + t(D−D̃)²` is central; several are checked and no
/// `ĉ₁` is reported.
pub fn casimir(rep: &Representation) -> Result<CasimirReport> {
    let p = &rep.params;
    let d = rep.d();
    let dt = rep.dt();
    let interior = rep.interior();
    let commutator =
        |c: &CMatrix| linalg::max_abs_split(&linalg::commutator(c, &rep.w), &rep.boundary).0;
    let zero_tol = |x: f64| x.abs() <= 1e-12;

    let (c, commutator_residual, det_one) = if p.is_det_one() {
        let c = casimir_rst(&d, &dt, -4.0 * p.a, 2.0 - p.tr_a, 2.0 + p.tr_a);
        let res = commutator(&c);
        (c, res, true)
    } else if zero_tol(p.det_a + 1.0) && zero_tol(p.tr_a) && zero_tol(p.a) {
        let sets = [
            (1.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, 0.0, 1.0),
            (1.0, 1.0, 1.0),
        ];
        let res = sets
            .iter()
            .map(|&(r, s, t)| commutator(&casimir_rst(&d, &dt, r, s, t)))
            .fold(0.0, f64::max);
        (casimir_rst(&d, &dt, 1.0, 1.0, 1.0), res, false)
    } else {
        return Err(Error::UnsupportedCase(format!(
            "Ĉ is central only for det A = 1 or (det A, tr A, a) = (−1, 0, 0); got ({}, {}, {})",
            p.det_a, p.tr_a, p.a
        )));
    };

    let diag = linalg::diagonal_re(&c);
    let values: Vec<f64> = interior.iter().map(|&i| diag[i]).collect();
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
    let (mean, spread) = if values.is_empty() {
        (None, 0.0)
    } else {
        (
            Some(values.iter().sum::<f64>() / values.len() as f64),
            hi - lo,
        )
    };
    let off = {
        let mut worst = 0.0f64;
        for &i in &interior {
            for &j in &interior {
                if i != j {
                    worst = worst.max(c[(i, j)].norm());
                }
            }
        }
        worst
    };
    let proportional = mean.is_some_and(|m| spread.max(off) <= 1e-8 * (1.0 + m.abs()));
    Ok(CasimirReport {
        matrix_diagonal: diag,
        chat1: (det_one && proportional).then(|| mean.unwrap() / 4.0),
        mean: if det_one { mean } else { None },
        proportional,
        spread,
        commutator_residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct XyzRealization {
    pub x: CMatrix,
    pub y: CMatrix,
    pub z: CMatrix,
    pub hermitian_residual: f64,
    /// `Ĉ` from the `X, Y, Z` formula against the `D, D̃` formula.
    pub casimir_xyz_residual: f64,
    /// `D + D̃ − 2(X² + Y²)`.
    pub sum_residual: f64,
    /// `D − D̃ − 2ħZ`.
    pub diff_residual: f64,
}

/// `X = (W+V)/2`, `Y = (W−V)/(2i)`, `Z = [X, Y]/(iħ)`.
pub fn xyz_realization(rep: &Representation, hbar: f64) -> Result<XyzRealization> {
    if hbar == 0.0 || !hbar.is_finite() {
        return Err(Error::InvalidInput("ħ must be finite and nonzero".into()));
    }
    let p = &rep.params;
    let w = &rep.w;
    let v = rep.v();
    let half = Complex64::new(0.5, 0.0);
    let x = (w + &v) * half;
    let y = (w - &v) * Complex64::new(0.0, -0.5);
    let z = linalg::commutator(&x, &y) * Complex64::new(0.0, -1.0 / hbar);
    let hermitian_residual = linalg::hermitian_residual(&x)
        .max(linalg::hermitian_residual(&y))
        .max(linalg::hermitian_residual(&z));

    let d = rep.d();
    let dt = rep.dt();
    let r2 = &x * &x + &y * &y;
    let sum_residual = linalg::max_abs(&(&d + &dt - linalg::scaled(&r2, 2.0)));
    let diff_residual = linalg::max_abs(&(&d - &dt - linalg::scaled(&z, 2.0 * hbar)));
    let from_xyz = linalg::scaled(&r2, -8.0 * p.a)
        + linalg::scaled(&(&r2 * &r2), 4.0 * (2.0 - p.tr_a))
        + linalg::scaled(&(&z * &z), 4.0 * hbar * hbar * (2.0 + p.tr_a));
    let from_d = casimir_rst(&d, &dt, -4.0 * p.a, 2.0 - p.tr_a, 2.0 + p.tr_a);
    Ok(XyzRealization {
        casimir_xyz_residual: linalg::max_abs(&(from_xyz - from_d)),
        x,
        y,
        z,
        hermitian_residual,
        sum_residual,
        diff_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReorderReport {
    pub interior: f64,
    pub boundary: f64,
}

/// `p(map(X, Y))` for the monomial `p = Xⁱ Yʲ`, with the affine map applied to
/// the matrix pair.
pub(crate) fn monomial_after(
    map: &AffineMap2,
    x: &CMatrix,
    y: &CMatrix,
    i: usize,
    j: usize,
) -> CMatrix {
    let n = x.nrows();
    let id = linalg::identity(n);
    let mx = linalg::scaled(x, map.a11) + linalg::scaled(y, map.a12) + linalg::scaled(&id, map.t1);
    let my = linalg::scaled(x, map.a21) + linalg::scaled(y, map.a22) + linalg::scaled(&id, map.t2);
    linalg::power(&mx, i) * linalg::power(&my, j)
}

/// Residuals of `Wⁿ p(D, D̃) = p(L̂ⁿ(D, D̃)) Wⁿ` and
/// `p(D, D̃) Vⁿ = Vⁿ p(L̂ⁿ(D, D̃))` over monomials `Dⁱ D̃ʲ` with
/// `i + j ≤ degree` and powers `1 ≤ n ≤ max_power`.
pub fn reorder_check(rep: &Representation, degree: usize, max_power: usize) -> ReorderReport {
    let d = rep.d();
    let dt = rep.dt();
    let v = rep.v();
    let lhat = rep.params.lhat();
    let identity = AffineMap2::identity();
    let mut report = ReorderReport {
        interior: 0.0,
        boundary: 0.0,
    };
    for n in 1..=max_power {
        let map_n = lhat.power(n);
        let wn = linalg::power(&rep.w, n);
        let vn = linalg::power(&v, n);
        for i in 0..=degree {
            for j in 0..=(degree - i) {
                let p = monomial_after(&identity, &d, &dt, i, j);
                let q = monomial_after(&map_n, &d, &dt, i, j);
                for residual in [&wn * &p - &q * &wn, &p * &vn - &vn * &q] {
                    let (inner, outer) = linalg::max_abs_split(&residual, &rep.boundary);
                    report.interior = report.interior.max(inner);
                    report.boundary = report.boundary.max(outer);
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::elliptic_parametrization;
    use std::f64::consts::PI;

    fn eleven() -> AlgebraParams {
        AlgebraParams::elliptic(PI / 11.0, 0.5)
            .with_chat(1.0)
            .unwrap()
    }

    fn one_sided_params() -> AlgebraParams {
        let d = 1.0 - 2.0 * 0.09 * 0.25;
        let a = 2.0 * 0.09 / d;
        AlgebraParams::new(2.0 + a, 1.0, a).with_chat(1.02).unwrap()
    }

    fn eleven_loop(beta: f64) -> Representation {
        let params = eleven();
        let curve = crate::curve::ConstraintCurve::from_params(&params).unwrap();
        let x1 = curve.nearest_point([1.56, 1.0]).unwrap();
        build_loop(&params, x1, 11, beta, &Tolerances::default()).unwrap()
    }

    #[test]
    fn eleven_dim_loop_entries() {
        let rep = eleven_loop(0.0);
        let sup = rep.superdiagonal();
        assert!((sup[0] - 1.25).abs() < 0.01, "{sup:?}");
        assert!((sup[1] - 1.46).abs() < 0.01, "{sup:?}");
        assert!((sup[9] - 0.79).abs() < 0.01, "{sup:?}");
        assert!((rep.corner().unwrap().norm() - 1.0).abs() < 0.01);
        assert!(verify_relations(&rep).passes(1e-10));
    }

    #[test]
    fn loop_rejects_non_periodic_start() {
        let err = build_loop(&eleven(), [1.0, 1.0], 10, 0.0, &Tolerances::default()).unwrap_err();
        assert!(matches!(err, Error::NotPeriodic { .. }));
    }

    #[test]
    fn fixed_point_loop_is_scalar() {
        let params = AlgebraParams::elliptic(0.4, 0.3);
        let mu = params.mu().unwrap();
        let rep = build_loop(&params, [mu, mu], 1, 0.7, &Tolerances::default()).unwrap();
        assert_eq!(rep.kind, RepKind::Scalar);
        assert!((rep.w[(0, 0)] - Complex64::from_polar(mu.sqrt(), 0.7)).norm() < 1e-15);
        let scalar = build_scalar(&params, mu, 0.7, &Tolerances::default()).unwrap();
        assert_eq!(scalar.w, rep.w);
        assert!(casimir(&scalar).unwrap().proportional);
    }

    #[test]
    fn zero_rep_has_zero_residuals() {
        let params = AlgebraParams::new(2.5, 1.0, 0.0);
        let rep = build_scalar(&params, 0.0, 0.0, &Tolerances::default()).unwrap();
        let report = verify_relations(&rep);
        assert_eq!(report.max_interior(), 0.0);
        let xyz = xyz_realization(&rep, 0.3).unwrap();
        assert_eq!(
            linalg::max_abs(&xyz.x) + linalg::max_abs(&xyz.y) + linalg::max_abs(&xyz.z),
            0.0
        );
    }

    #[test]
    fn perturbation_is_detected() {
        let mut rep = eleven_loop(0.0);
        let report = verify_relations(&rep);
        assert!(report.passes(1e-10));
        for i in 0..10 {
            rep.w[(i, i + 1)] += real(1e-3 * ((i % 3) as f64 - 1.0 + 0.5));
        }
        let report = verify_relations(&rep);
        assert!(report.residual_cdef1.max(report.residual_cdef2) >= 1e-4);
    }

    #[test]
    fn one_sided_example_entries() {
        let params = one_sided_params();
        let r_plus = crate::curve::ConstraintCurve::from_params(&params)
            .unwrap()
            .axes_crossings()
            .r_plus
            .unwrap();
        let rep = build_one_sided(&params, r_plus, 4, &Tolerances::default()).unwrap();
        let sup = rep.superdiagonal();
        for (got, want) in sup.iter().zip([0.41, 0.74, 1.11, 1.53]) {
            assert!((got - want).abs() < 0.01, "{sup:?}");
        }
        let report = verify_relations(&rep);
        assert!(report.passes(1e-10), "{report:?}");
        assert!(report.boundary.unwrap().residual_cdef1 > 1e-3);
    }

    #[test]
    fn one_sided_single_vertex() {
        let rep = build_one_sided(&one_sided_params(), 0.1657, 0, &Tolerances::default()).unwrap();
        assert_eq!(rep.dim(), 1);
        assert_eq!(rep.w[(0, 0)], real(0.0));
        assert_eq!(rep.boundary, vec![0]);
    }

    #[test]
    fn two_sided_from_tip() {
        let params = one_sided_params();
        let r0 = params.mu().unwrap() + params.chat().unwrap().sqrt();
        let rep = build_two_sided(&params, [r0, r0], 3, &Tolerances::default()).unwrap();
        let sup = rep.superdiagonal();
        let want = [0.79, 0.45, 0.10, 0.10, 0.45, 0.79];
        for (got, want) in sup.iter().zip(want) {
            assert!((got - want).abs() < 0.01, "{sup:?}");
        }
        assert!(verify_relations(&rep).passes(1e-10));
    }

    #[test]
    fn reversed_one_sided_mirrors_forward() {
        let params = one_sided_params();
        let r_plus = crate::curve::ConstraintCurve::from_params(&params)
            .unwrap()
            .axes_crossings()
            .r_plus
            .unwrap();
        let tol = Tolerances::default();
        let fwd = build_one_sided(&params, r_plus, 5, &tol).unwrap();
        let rev = build_one_sided_reversed(&params, r_plus, 5, &tol).unwrap();
        let mut a = fwd.superdiagonal();
        a.reverse();
        for (x, y) in a.iter().zip(rev.superdiagonal()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(verify_relations(&rev).passes(1e-10));
    }

    #[test]
    fn string_in_hyperbolic_regime() {
        let (theta, mu) = (0.35, 1.2);
        let params = AlgebraParams::hyperbolic(theta, mu * (2.0 - 2.0 * (2.0 * theta).cosh()));
        let x = 2.0 * mu * theta.sinh() * (3.0 * theta).sinh() / (4.0 * theta).cosh();
        let params = params.with_chat1(x * x - params.a * x);
        let rep = build_string(&params, 4, &Tolerances::default()).unwrap();
        assert_eq!(rep.dim(), 4);
        assert!(rep.corner().is_none());
        let report = verify_relations(&rep);
        assert!(report.passes(1e-10), "{report:?}");
        let cas = casimir(&rep).unwrap();
        assert!(cas.proportional);
        assert!((cas.chat1.unwrap() - params.chat1.unwrap()).abs() < 1e-10);
    }

    #[test]
    fn no_string_for_positive_translation() {
        let params = AlgebraParams::new(3.0, 1.0, 0.5);
        assert!(matches!(
            build_string(&params, 5, &Tolerances::default()),
            Err(Error::NoString { .. })
        ));
    }

    #[test]
    fn loop_casimir_matches_curve() {
        let rep = eleven_loop(0.0);
        let cas = casimir(&rep).unwrap();
        assert!(cas.proportional);
        let params = rep.params.with_chat1(cas.chat1.unwrap());
        assert!((params.chat().unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn phase_does_not_change_spectrum() {
        let a = eleven_loop(0.0);
        let b = eleven_loop(PI);
        assert_eq!(a.d_spectrum().len(), 11);
        for (x, y) in a.d_spectrum().iter().zip(b.d_spectrum()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn xyz_identities_on_loop() {
        let rep = eleven_loop(1.0);
        let xyz = xyz_realization(&rep, (PI / 11.0).tan()).unwrap();
        assert!(xyz.hermitian_residual < 1e-10 * 11.0);
        assert!(xyz.sum_residual < 1e-10 * 11.0);
        assert!(xyz.diff_residual < 1e-10 * 11.0);
        assert!(xyz.casimir_xyz_residual < 1e-9 * 11.0);
        assert!(xyz_realization(&rep, 0.0).is_err());
    }

    #[test]
    fn reorder_identities() {
        let rep = eleven_loop(0.3);
        let r = reorder_check(&rep, 0, 4);
        assert_eq!(r.interior, 0.0);
        let r = reorder_check(&rep, 3, 4);
        assert!(r.interior < 1e-9 * 11.0, "{r:?}");
        let params = one_sided_params();
        let rep = build_one_sided(&params, 0.165_737, 6, &Tolerances::default()).unwrap();
        assert!(reorder_check(&rep, 2, 2).interior < 1e-9 * 7.0);
    }

    #[test]
    fn rst_casimir_for_reflection_family() {
        // det A = −1, tr A = 0, a = 0: L̂(x, y) = (y, x)
        let params = AlgebraParams::new(0.0, -1.0, 0.0);
        let map = params.lhat();
        assert_eq!(map.apply([2.0, 3.0]), [3.0, 2.0]);
        let rep = build_loop(&params, [2.0, 3.0], 2, 0.4, &Tolerances::default()).unwrap();
        assert!(verify_relations(&rep).passes(1e-10));
        let cas = casimir(&rep).unwrap();
        assert!(cas.commutator_residual < 1e-10);
        assert!(cas.chat1.is_none());
        let other = Representation {
            params: AlgebraParams::new(0.5, 2.0, 0.0),
            ..rep
        };
        assert!(matches!(casimir(&other), Err(Error::UnsupportedCase(_))));
    }

    #[test]
    fn elliptic_loops_at_rational_angle() {
        let params = AlgebraParams::elliptic(PI / 7.0, 1.0)
            .with_chat(0.2)
            .unwrap();
        let x1 = elliptic_parametrization(&params, 0.3).unwrap();
        let rep = build_loop(&params, x1, 7, 0.0, &Tolerances::default()).unwrap();
        assert!(verify_relations(&rep).passes(1e-10));
    }
}
