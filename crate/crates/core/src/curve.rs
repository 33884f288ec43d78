//! The constraint curve Γ = p⁻¹(0) in the (r, s) plane for `det A = 1`.
//!
//! Working in `u = r + s`, `v = r − s` the polynomial reads
//! `p = A u² + B v² − 4a u − 4ĉ₁` with `A = 2 − tr A` and `B = 2 + tr A`,
//! so every shape question reduces to a conic in normal form.

use std::io::Write;

use serde::Serialize;

use crate::dynamics::{distance, Point};
use crate::error::{Error, Result};
use crate::params::AlgebraParams;
use crate::tolerance::{near_zero, EQ_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintCurve {
    params: AlgebraParams,
    chat1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxesCrossings {
    pub r_plus: Option<f64>,
    pub r_minus: Option<f64>,
    pub real_crossings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveShape {
    Ellipse,
    Hyperbola,
    Parabola,
    ParallelLines,
    CrossingLines,
    Line,
    Point,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadrantRelation {
    InsidePositive,
    CrossesAxes,
    Outside,
    Mixed,
}

/// Position of one connected piece of Γ relative to the closed quadrant
/// `r, s ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentRelation {
    /// Contained in the open quadrant.
    Inside,
    /// Meets a nonnegative half-axis (tangency included).
    Crosses,
    /// Disjoint from the closed quadrant.
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentInfo {
    pub id: usize,
    pub compact: bool,
    pub relation: ComponentRelation,
    /// Points of this component on the nonnegative half-axes.
    pub axis_hits: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveClassification {
    pub shape: CurveShape,
    pub quadrant: QuadrantRelation,
    pub components: Vec<ComponentInfo>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub component: usize,
    pub r: f64,
    pub s: f64,
}

/// Parametrized connected piece, in `(u, v)` coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Piece {
    /// `u = u0 + ru cos t`, `v = rv sin t`.
    Ellipse {
        u0: f64,
        ru: f64,
        rv: f64,
    },
    /// `u = u0 + sign·ru cosh t`, `v = rv sinh t`.
    HyperbolaU {
        u0: f64,
        ru: f64,
        rv: f64,
        sign: f64,
    },
    /// `u = u0 + ru sinh t`, `v = sign·rv cosh t`.
    HyperbolaV {
        u0: f64,
        ru: f64,
        rv: f64,
        sign: f64,
    },
    /// `(u, v) = base + t·dir`.
    Line {
        base: [f64; 2],
        dir: [f64; 2],
    },
    /// `u = (t² − ĉ₁)/a`, `v = t`.
    Parabola {
        a: f64,
        chat1: f64,
    },
    Point {
        u: f64,
        v: f64,
    },
}

fn to_rs(u: f64, v: f64) -> Point {
    [(u + v) / 2.0, (u - v) / 2.0]
}

impl Piece {
    fn uv(&self, t: f64) -> [f64; 2] {
        match *self {
            Piece::Ellipse { u0, ru, rv } => [u0 + ru * t.cos(), rv * t.sin()],
            Piece::HyperbolaU { u0, ru, rv, sign } => [u0 + sign * ru * t.cosh(), rv * t.sinh()],
            Piece::HyperbolaV { u0, ru, rv, sign } => [u0 + ru * t.sinh(), sign * rv * t.cosh()],
            Piece::Line { base, dir } => [base[0] + t * dir[0], base[1] + t * dir[1]],
            Piece::Parabola { a, chat1 } => [(t * t - chat1) / a, t],
            Piece::Point { u, v } => [u, v],
        }
    }

    fn point(&self, t: f64) -> Point {
        let [u, v] = self.uv(t);
        to_rs(u, v)
    }

    fn compact(&self) -> bool {
        matches!(self, Piece::Ellipse { .. } | Piece::Point { .. })
    }

    /// Parameter interval covering coordinates up to about `extent`.
    fn range(&self, extent: f64) -> (f64, f64) {
        match *self {
            Piece::Ellipse { .. } => (0.0, std::f64::consts::TAU),
            Piece::HyperbolaU { ru, rv, .. } | Piece::HyperbolaV { ru, rv, .. } => {
                let t = (extent / ru.min(rv).max(f64::MIN_POSITIVE))
                    .asinh()
                    .max(1.0);
                (-t, t)
            }
            Piece::Line { .. } => (-extent, extent),
            Piece::Parabola { a, .. } => {
                let t = (extent * a.abs()).sqrt().max(extent.min(1.0));
                (-t, t)
            }
            Piece::Point { .. } => (0.0, 0.0),
        }
    }

    /// Whether `(u, v)`, already known to lie on Γ, belongs to this piece.
    fn owns(&self, u: f64, v: f64, scale: f64) -> bool {
        match *self {
            Piece::HyperbolaU { u0, sign, .. } => (u - u0) * sign > 0.0,
            Piece::HyperbolaV { sign, .. } => v * sign > 0.0,
            Piece::Line { base, dir } => {
                let cross = (u - base[0]) * dir[1] - (v - base[1]) * dir[0];
                cross.abs() <= 1e-9 * scale
            }
            _ => true,
        }
    }

    /// A point used to decide on which side of the quadrant boundary a piece
    /// lies when it does not meet the boundary.
    fn representative(&self) -> Point {
        self.point(0.0)
    }
}

impl ConstraintCurve {
    pub fn new(params: AlgebraParams, chat1: f64) -> Result<Self> {
        params.validate()?;
        if !chat1.is_finite() {
            return Err(Error::InvalidInput("ĉ₁ must be finite".into()));
        }
        if !params.is_det_one() {
            return Err(Error::UnsupportedRegime(format!(
                "the constraint curve is defined for det A = 1, got {}",
                params.det_a
            )));
        }
        Ok(Self {
            params: params.with_chat1(chat1),
            chat1,
        })
    }

    /// Curve for parameters carrying their own `ĉ₁`.
    pub fn from_params(params: &AlgebraParams) -> Result<Self> {
        let chat1 = params
            .chat1
            .ok_or_else(|| Error::InvalidInput("ĉ₁ is required for the constraint curve".into()))?;
        Self::new(*params, chat1)
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn chat1(&self) -> f64 {
        self.chat1
    }

    pub fn delta(&self) -> f64 {
        2.0 - self.params.tr_a
    }

    pub fn mu(&self) -> Option<f64> {
        self.params.mu()
    }

    pub fn chat(&self) -> Option<f64> {
        self.params.chat()
    }

    /// `p(r,s) = −4a(r+s) + (2−tr A)(r+s)² + (2+tr A)(r−s)² − 4ĉ₁`.
    pub fn evaluate_p(&self, r: f64, s: f64) -> f64 {
        let (t, a) = (self.params.tr_a, self.params.a);
        let (u, v) = (r + s, r - s);
        -4.0 * a * u + (2.0 - t) * u * u + (2.0 + t) * v * v - 4.0 * self.chat1
    }

    /// `Δ[(r+s−2μ)² + ((2+tr A)/Δ)(r−s)² − 4ĉ]`, defined when `Δ ≠ 0`.
    pub fn evaluate_p_centered(&self, r: f64, s: f64) -> Option<f64> {
        let (mu, chat) = (self.mu()?, self.chat()?);
        let delta = self.delta();
        let w = r + s - 2.0 * mu;
        let v = r - s;
        Some(delta * (w * w + (2.0 + self.params.tr_a) / delta * v * v - 4.0 * chat))
    }

    /// Intersections with the r-axis: `r± = ½[a ± √(a² + 4ĉ₁)]`. The same
    /// values mark the s-axis crossings.
    pub fn axes_crossings(&self) -> AxesCrossings {
        let a = self.params.a;
        let disc = a * a + 4.0 * self.chat1;
        let disc = if near_zero(disc, a * a + 4.0 * self.chat1.abs()) {
            0.0
        } else {
            disc
        };
        if disc < 0.0 {
            return AxesCrossings {
                r_plus: None,
                r_minus: None,
                real_crossings: false,
            };
        }
        let root = disc.sqrt();
        AxesCrossings {
            r_plus: Some((a + root) / 2.0),
            r_minus: Some((a - root) / 2.0),
            real_crossings: true,
        }
    }

    fn scale(&self) -> f64 {
        let mu = self.mu().unwrap_or(0.0);
        1.0f64
            .max(self.params.a.abs())
            .max(self.chat1.abs().sqrt())
            .max(mu.abs())
    }

    /// ĉ with values indistinguishable from zero snapped to zero.
    fn snapped_chat(&self) -> Option<f64> {
        let chat = self.chat()?;
        let mu = self.mu()?;
        let reference = (mu * mu).max((self.chat1 / self.delta()).abs()).max(1.0);
        Some(if chat.abs() <= 1e3 * EQ_TOL * reference {
            0.0
        } else {
            chat
        })
    }

    fn pieces(&self) -> (CurveShape, Vec<Piece>) {
        let t = self.params.tr_a;
        let big_a = 2.0 - t;
        let big_b = 2.0 + t;
        let a = self.params.a;
        if near_zero(big_a, 4.0) {
            // tr A = 2: 4v² − 4au − 4ĉ₁ = 0
            if !near_zero(a, 1.0) {
                return (
                    CurveShape::Parabola,
                    vec![Piece::Parabola {
                        a,
                        chat1: self.chat1,
                    }],
                );
            }
            return self.line_pair_v(self.chat1);
        }
        let mu = self.mu().expect("Δ ≠ 0 here");
        let chat = self.snapped_chat().expect("Δ ≠ 0 here");
        let u0 = 2.0 * mu;
        if near_zero(big_b, 4.0) {
            // tr A = −2: (u − 2μ)² = 4ĉ
            return if chat > 0.0 {
                let h = 2.0 * chat.sqrt();
                (
                    CurveShape::ParallelLines,
                    vec![
                        Piece::Line {
                            base: [u0 - h, 0.0],
                            dir: [0.0, 1.0],
                        },
                        Piece::Line {
                            base: [u0 + h, 0.0],
                            dir: [0.0, 1.0],
                        },
                    ],
                )
            } else if chat == 0.0 {
                (
                    CurveShape::Line,
                    vec![Piece::Line {
                        base: [u0, 0.0],
                        dir: [0.0, 1.0],
                    }],
                )
            } else {
                (CurveShape::Empty, vec![])
            };
        }
        let ratio = big_b / big_a;
        if ratio > 0.0 {
            let k = ratio.sqrt();
            if chat > 0.0 {
                let ru = 2.0 * chat.sqrt();
                (
                    CurveShape::Ellipse,
                    vec![Piece::Ellipse { u0, ru, rv: ru / k }],
                )
            } else if chat == 0.0 {
                (CurveShape::Point, vec![Piece::Point { u: u0, v: 0.0 }])
            } else {
                (CurveShape::Empty, vec![])
            }
        } else {
            let k = (-ratio).sqrt();
            if chat > 0.0 {
                let ru = 2.0 * chat.sqrt();
                let rv = ru / k;
                (
                    CurveShape::Hyperbola,
                    vec![
                        Piece::HyperbolaU {
                            u0,
                            ru,
                            rv,
                            sign: 1.0,
                        },
                        Piece::HyperbolaU {
                            u0,
                            ru,
                            rv,
                            sign: -1.0,
                        },
                    ],
                )
            } else if chat < 0.0 {
                let ru = 2.0 * (-chat).sqrt();
                let rv = ru / k;
                (
                    CurveShape::Hyperbola,
                    vec![
                        Piece::HyperbolaV {
                            u0,
                            ru,
                            rv,
                            sign: 1.0,
                        },
                        Piece::HyperbolaV {
                            u0,
                            ru,
                            rv,
                            sign: -1.0,
                        },
                    ],
                )
            } else {
                let norm = (1.0 + 1.0 / (k * k)).sqrt();
                (
                    CurveShape::CrossingLines,
                    vec![
                        Piece::Line {
                            base: [u0, 0.0],
                            dir: [1.0 / norm, 1.0 / (k * norm)],
                        },
                        Piece::Line {
                            base: [u0, 0.0],
                            dir: [1.0 / norm, -1.0 / (k * norm)],
                        },
                    ],
                )
            }
        }
    }

    /// `v² = ĉ₁` (tr A = 2, a = 0).
    fn line_pair_v(&self, chat1: f64) -> (CurveShape, Vec<Piece>) {
        if near_zero(chat1, 1.0) {
            (
                CurveShape::Line,
                vec![Piece::Line {
                    base: [0.0, 0.0],
                    dir: [1.0, 0.0],
                }],
            )
        } else if chat1 > 0.0 {
            let h = chat1.sqrt();
            (
                CurveShape::ParallelLines,
                vec![
                    Piece::Line {
                        base: [0.0, h],
                        dir: [1.0, 0.0],
                    },
                    Piece::Line {
                        base: [0.0, -h],
                        dir: [1.0, 0.0],
                    },
                ],
            )
        } else {
            (CurveShape::Empty, vec![])
        }
    }

    pub fn shape(&self) -> CurveShape {
        self.pieces().0
    }

    /// Conic type plus the position of each component relative to the
    /// closed positive quadrant, decided from the axes crossings.
    pub fn classify(&self) -> CurveClassification {
        let (shape, pieces) = self.pieces();
        let scale = self.scale();
        let crossings = self.axes_crossings();
        let mut boundary = Vec::new();
        for r in [crossings.r_plus, crossings.r_minus].into_iter().flatten() {
            if r >= -EQ_TOL * scale {
                let r = r.max(0.0);
                boundary.push([r, 0.0]);
                boundary.push([0.0, r]);
            }
        }
        boundary.dedup_by(|p, q| distance(*p, *q) <= EQ_TOL * scale);

        let components: Vec<ComponentInfo> = pieces
            .iter()
            .enumerate()
            .map(|(id, piece)| {
                let axis_hits: Vec<Point> = boundary
                    .iter()
                    .copied()
                    .filter(|p| {
                        let (u, v) = (p[0] + p[1], p[0] - p[1]);
                        piece.owns(u, v, scale) && self.point_on_piece(piece, *p, scale)
                    })
                    .collect();
                let relation = if !axis_hits.is_empty() {
                    ComponentRelation::Crosses
                } else {
                    let p = piece.representative();
                    if p[0] > 0.0 && p[1] > 0.0 {
                        ComponentRelation::Inside
                    } else {
                        ComponentRelation::Outside
                    }
                };
                ComponentInfo {
                    id,
                    compact: piece.compact(),
                    relation,
                    axis_hits,
                }
            })
            .collect();

        let relevant: Vec<ComponentRelation> = components
            .iter()
            .map(|c| c.relation)
            .filter(|r| *r != ComponentRelation::Outside)
            .collect();
        let quadrant = if relevant.is_empty() {
            QuadrantRelation::Outside
        } else if relevant.iter().all(|r| *r == ComponentRelation::Inside) {
            QuadrantRelation::InsidePositive
        } else if relevant.iter().all(|r| *r == ComponentRelation::Crosses) {
            QuadrantRelation::CrossesAxes
        } else {
            QuadrantRelation::Mixed
        };
        CurveClassification {
            shape,
            quadrant,
            components,
        }
    }

    /// Lines of a pair both satisfy p = 0; a hit belongs to a line only when it
    /// lies on it.
    fn point_on_piece(&self, piece: &Piece, p: Point, scale: f64) -> bool {
        match piece {
            Piece::Point { u, v } => distance(to_rs(*u, *v), p) <= 1e-9 * scale,
            _ => true,
        }
    }

    fn default_extent(&self) -> f64 {
        let mu = self.mu().unwrap_or(0.0).abs();
        let chat = self.chat().unwrap_or(0.0).abs().sqrt();
        4.0 * (mu + chat + self.params.a.abs() + self.chat1.abs().sqrt()).max(1.0)
    }

    /// `count` points per component, ordered along it. Closed components
    /// repeat their first point at the end.
    pub fn sample(&self, count: usize) -> Result<Vec<CurveSample>> {
        self.sample_with_extent(count, self.default_extent())
    }

    pub fn sample_with_extent(&self, count: usize, extent: f64) -> Result<Vec<CurveSample>> {
        if count < 2 {
            return Err(Error::InvalidInput("sample count must be ≥ 2".into()));
        }
        let (_, pieces) = self.pieces();
        if pieces.is_empty() {
            return Err(Error::EmptyCurve);
        }
        let mut out = Vec::with_capacity(count * pieces.len());
        for (component, piece) in pieces.iter().enumerate() {
            if let Piece::Point { .. } = piece {
                let [r, s] = piece.point(0.0);
                out.push(CurveSample { component, r, s });
                continue;
            }
            let (lo, hi) = piece.range(extent);
            for i in 0..count {
                let t = if i + 1 == count {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (count - 1) as f64
                };
                let [r, s] = if piece.compact() && i + 1 == count {
                    piece.point(lo)
                } else {
                    piece.point(t)
                };
                out.push(CurveSample { component, r, s });
            }
        }
        Ok(out)
    }

    /// Point of Γ closest to `target`.
    pub fn nearest_point(&self, target: Point) -> Result<Point> {
        let (_, pieces) = self.pieces();
        if pieces.is_empty() {
            return Err(Error::EmptyCurve);
        }
        let extent = self
            .default_extent()
            .max(2.0 * (target[0].abs() + target[1].abs()));
        let mut best: Option<(f64, Point)> = None;
        for piece in &pieces {
            let candidate = nearest_on_piece(piece, target, extent);
            let d = distance(candidate, target);
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, candidate));
            }
        }
        Ok(best.expect("at least one piece").1)
    }

    /// Writes samples as CSV with header `component,r,s`.
    pub fn write_csv<W: Write>(samples: &[CurveSample], writer: W) -> Result<()> {
        let mut csv = csv::Writer::from_writer(writer);
        for sample in samples {
            csv.serialize(sample)
                .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
        }
        csv.flush()
            .map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
        Ok(())
    }
}

fn nearest_on_piece(piece: &Piece, target: Point, extent: f64) -> Point {
    if let Piece::Point { .. } = piece {
        return piece.point(0.0);
    }
    const GRID: usize = 4096;
    let (lo, hi) = piece.range(extent);
    let step = (hi - lo) / GRID as f64;
    let dist = |t: f64| distance(piece.point(t), target);
    let best_i = (0..=GRID)
        .min_by(|&i, &j| dist(lo + step * i as f64).total_cmp(&dist(lo + step * j as f64)))
        .expect("non-empty grid");
    // golden-section refinement in the bracketing cells
    let (mut x0, mut x1) = (
        lo + step * (best_i as f64 - 1.0),
        lo + step * (best_i as f64 + 1.0),
    );
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = x1 - g * (x1 - x0);
    let mut d = x0 + g * (x1 - x0);
    for _ in 0..100 {
        if dist(c) < dist(d) {
            x1 = d;
        } else {
            x0 = c;
        }
        c = x1 - g * (x1 - x0);
        d = x0 + g * (x1 - x0);
    }
    piece.point((x0 + x1) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn eleven() -> ConstraintCurve {
        let params = AlgebraParams::elliptic(PI / 11.0, 0.5)
            .with_chat(1.0)
            .unwrap();
        ConstraintCurve::from_params(&params).unwrap()
    }

    fn one_sided() -> ConstraintCurve {
        // a, tr A from the bridge for α₀ = α₁ = −1, ħ = 0.3
        let d = 1.0 - 2.0 * 0.09 * 0.25;
        let a = 2.0 * 0.09 / d;
        let params = AlgebraParams::new(2.0 + a, 1.0, a).with_chat(1.02).unwrap();
        ConstraintCurve::from_params(&params).unwrap()
    }

    #[test]
    fn origin_with_zero_parameters() {
        let curve = ConstraintCurve::new(AlgebraParams::new(0.0, 1.0, 0.0), 0.0).unwrap();
        assert_eq!(curve.evaluate_p(0.0, 0.0), 0.0);
    }

    #[test]
    fn eleven_dim_start_point_is_near_curve() {
        assert!(eleven().evaluate_p(1.56, 1.0).abs() < 2e-2);
    }

    #[test]
    fn centered_form_matches() {
        let curve = one_sided();
        for &(r, s) in &[(0.3, 2.0), (-1.0, 0.5), (4.0, 4.0)] {
            let p = curve.evaluate_p(r, s);
            let q = curve.evaluate_p_centered(r, s).unwrap();
            assert!((p - q).abs() <= 1e-10 * p.abs().max(1.0));
        }
    }

    #[test]
    fn one_sided_axes_crossings() {
        let x = one_sided().axes_crossings();
        assert!(x.real_crossings);
        assert!((x.r_plus.unwrap() - 0.165_74).abs() < 1e-5);
        assert!((x.r_minus.unwrap() - 0.022_74).abs() < 1e-5);
    }

    #[test]
    fn trivial_axes_crossings() {
        let x = ConstraintCurve::new(AlgebraParams::new(1.0, 1.0, 0.0), 0.0)
            .unwrap()
            .axes_crossings();
        assert_eq!((x.r_plus, x.r_minus), (Some(0.0), Some(0.0)));
        let x = ConstraintCurve::new(AlgebraParams::new(1.0, 1.0, 0.2), -0.5)
            .unwrap()
            .axes_crossings();
        assert!(!x.real_crossings);
    }

    #[test]
    fn ellipse_inside_and_crossing() {
        let c = eleven().classify();
        assert_eq!(c.shape, CurveShape::Ellipse);
        assert_eq!(c.quadrant, QuadrantRelation::InsidePositive);
        // μ/√ĉ < 1 puts the origin side of the ellipse across the axes
        let params = AlgebraParams::elliptic(0.2, 0.5 * (2.0 - 2.0 * 0.4f64.cos()))
            .with_chat(1.0)
            .unwrap();
        let c = ConstraintCurve::from_params(&params).unwrap().classify();
        assert_eq!(c.shape, CurveShape::Ellipse);
        assert_eq!(c.quadrant, QuadrantRelation::CrossesAxes);
    }

    #[test]
    fn negative_delta_is_hyperbola() {
        let c = one_sided().classify();
        assert_eq!(c.shape, CurveShape::Hyperbola);
        assert_eq!(c.components.len(), 2);
    }

    #[test]
    fn degenerate_shapes() {
        let shape = |t: f64, a: f64, chat1: f64| {
            ConstraintCurve::new(AlgebraParams::new(t, 1.0, a), chat1)
                .unwrap()
                .shape()
        };
        assert_eq!(shape(-2.0, 1.0, 0.0), CurveShape::ParallelLines);
        assert_eq!(shape(2.0, 0.5, 0.1), CurveShape::Parabola);
        assert_eq!(shape(2.0, 0.0, 1.0), CurveShape::ParallelLines);
        assert_eq!(shape(2.0, 0.0, 0.0), CurveShape::Line);
        assert_eq!(shape(2.0, 0.0, -1.0), CurveShape::Empty);
        assert_eq!(shape(1.0, 1.0, -1.0), CurveShape::Point);
        assert_eq!(shape(1.0, 1.0, -2.0), CurveShape::Empty);
        assert_eq!(shape(3.0, 1.0, 1.0), CurveShape::CrossingLines);
    }

    #[test]
    fn samples_lie_on_curve() {
        for curve in [eleven(), one_sided()] {
            let samples = curve.sample(200).unwrap();
            for s in &samples {
                assert!(curve.evaluate_p(s.r, s.s).abs() <= 1e-8, "{s:?}");
            }
        }
    }

    #[test]
    fn ellipse_polyline_closes() {
        let samples = eleven().sample(50).unwrap();
        let (first, last) = (samples[0], samples[samples.len() - 1]);
        assert_eq!((first.r, first.s), (last.r, last.s));
    }

    #[test]
    fn empty_curve_cannot_be_sampled() {
        let curve = ConstraintCurve::new(AlgebraParams::new(1.0, 1.0, 0.2), -0.5).unwrap();
        assert!(matches!(curve.sample(10), Err(Error::EmptyCurve)));
    }

    #[test]
    fn nearest_point_to_eleven_dim_start() {
        let curve = eleven();
        let p = curve.nearest_point([1.56, 1.0]).unwrap();
        assert!(curve.evaluate_p(p[0], p[1]).abs() < 1e-9);
        assert!(distance(p, [1.56, 1.0]) < 1e-2);
    }

    #[test]
    fn csv_has_header() {
        let samples = eleven().sample(3).unwrap();
        let mut buf = Vec::new();
        ConstraintCurve::write_csv(&samples, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("component,r,s\n"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn rejects_det_not_one() {
        assert!(matches!(
            ConstraintCurve::new(AlgebraParams::new(1.0, 2.0, 0.0), 0.0),
            Err(Error::UnsupportedRegime(_))
        ));
    }
}
