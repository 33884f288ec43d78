//! Which representations a parameter point admits.
//!
//! The profile is computed from the dynamics of `L̂` on the constraint curve
//! (rotation arcs in the elliptic regime, ray following elsewhere) and then
//! compared with the rule the surface class predicts.

use serde::Serialize;

use crate::bridge::{surface_proxy, OrderingSpec};
use crate::classify::{classify_surface, ClassCode, SurfaceClass, Topology};
use crate::curve::ConstraintCurve;
use crate::dynamics::{
    elliptic_parametrization, find_kstring, find_periodic_orbit, follow_ray, RayFate,
    RAY_STEP_BUDGET,
};
use crate::error::{Error, Result};
use crate::params::{AlgebraParams, RotationAngle};
use crate::tolerance::EQ_TOL;
use crate::{Point, Tolerances};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Availability {
    Present,
    Absent,
    /// Exists, but its eigenvalue pairs accumulate at a fixed point of `L̂`
    /// on Γ which no finite iterate reaches.
    LimitOnly,
    /// Would exist if `θ/π` were irrational; with the detected rational
    /// angle the orbits close up into loops instead.
    NeedsIrrationalAngle,
}

impl Availability {
    pub fn exists(&self) -> bool {
        matches!(self, Availability::Present | Availability::LimitOnly)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Elliptic,
    Parabolic,
    Hyperbolic,
    /// `tr A ≤ −2`.
    Reflecting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OneSidedSeed {
    /// `(r, 0)` for a forward ray, `(0, r)` for a ray followed by `L̂⁻¹`.
    pub start: Point,
    pub reversed: bool,
    pub fate: RayFate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StringCandidate {
    pub n: usize,
    /// Start `(x, 0)` of the n-string of `L̂`.
    pub x: f64,
    /// The only `ĉ₁` whose curve carries this string: `x² − a x`.
    pub chat1_required: f64,
    /// `c₀` matching `chat1_required` under the ordering, when one is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0_required: Option<f64>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleCheck {
    pub rule: String,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExistenceProfile {
    pub code: ClassCode,
    pub regime: Regime,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// `θ/π = p/q` when detected with `q ≤ nmax`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational_angle: Option<[u64; 2]>,
    pub zero_rep: bool,
    /// `d` of the scalar `W = e^{iβ}√d` sitting on the fixed point `(d, d)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point_scalar: Option<f64>,
    /// Every `(r, r)` is fixed and on Γ.
    pub scalar_family: bool,
    pub scalar_only: bool,
    pub finite_loops: bool,
    pub finite_strings: bool,
    pub loop_dims: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loop_witness: Option<Point>,
    pub string_dims: Vec<usize>,
    pub string_candidates: Vec<StringCandidate>,
    pub one_sided: Availability,
    pub one_sided_seeds: Vec<OneSidedSeed>,
    pub two_sided: Availability,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_sided_seed: Option<Point>,
    pub critical_torus: bool,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule_check: Option<RuleCheck>,
}

impl ExistenceProfile {
    /// Number of one-sided seeds whose ray stays in the quadrant.
    pub fn surviving_one_sided(&self) -> usize {
        self.one_sided_seeds
            .iter()
            .filter(|s| s.fate.survives())
            .count()
    }

    pub fn has_any(&self) -> bool {
        self.zero_rep
            || self.fixed_point_scalar.is_some()
            || self.scalar_family
            || self.finite_loops
            || self.finite_strings
            || self.one_sided.exists()
            || self.two_sided.exists()
    }
}

/// Best rational approximation `p/q` of `x` with `q ≤ qmax` and error at
/// most `tol`, from the continued fraction convergents.
pub fn rational_approx(x: f64, qmax: u64, tol: f64) -> Option<(u64, u64)> {
    if !(x >= 0.0) || !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let (p2, q2) = (
            a.checked_mul(p1)?.checked_add(p0)?,
            a.checked_mul(q1)?.checked_add(q0)?,
        );
        if q2 > qmax {
            break;
        }
        if (x - p2 as f64 / q2 as f64).abs() <= tol {
            return Some((p2, q2));
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = rest - a as f64;
        if frac <= 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    None
}

const ANGLE_TOL: f64 = 1e-10;
const TWO_SIDED_SEEDS: usize = 256;

fn regime(params: &AlgebraParams) -> Regime {
    match params.rotation_angle() {
        Some(RotationAngle::Elliptic(_)) => Regime::Elliptic,
        Some(RotationAngle::Parabolic) => Regime::Parabolic,
        Some(RotationAngle::Hyperbolic(_)) => Regime::Hyperbolic,
        None => Regime::Reflecting,
    }
}

fn chat1_of(params: &AlgebraParams) -> Result<f64> {
    params
        .chat1
        .ok_or_else(|| Error::InvalidInput("ĉ₁ is required for an existence profile".into()))
}

fn casimir_matches(required: f64, chat1: f64, x: f64) -> bool {
    (required - chat1).abs() <= 1e-9 * (1.0 + chat1.abs() + x * x)
}

/// Points of Γ in the open quadrant, at most `count`, evenly thinned from a
/// dense sampling of every component.
pub fn quadrant_seeds(curve: &ConstraintCurve, count: usize) -> Vec<Point> {
    let samples = match curve.sample(count.max(2) * 10) {
        Ok(s) => s,
        Err(_) => return Vec::new(),
    };
    let inside: Vec<Point> = samples
        .iter()
        .filter(|s| s.r > 0.0 && s.s > 0.0)
        .map(|s| [s.r, s.s])
        .collect();
    if inside.len() <= count {
        return inside;
    }
    (0..count)
        .map(|i| inside[i * inside.len() / count])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchReport {
    pub starts: usize,
    /// Period and one point of every non-trivial periodic orbit found inside
    /// the open quadrant.
    pub loops: Vec<(usize, Point)>,
    /// Length and start of every string found on this curve.
    pub strings: Vec<(usize, Point)>,
}

/// Brute-force search for loops and strings of dimension `2..=nmax`:
/// periodic orbits from `grid` curve-seeded starts, forward orbits of the
/// r-axis crossings, and the linear string solve filtered by the Casimir.
pub fn exhaustive_search(
    params: &AlgebraParams,
    nmax: usize,
    grid: usize,
    tol: &Tolerances,
) -> Result<SearchReport> {
    let chat1 = chat1_of(params)?;
    let curve = ConstraintCurve::new(*params, chat1)?;
    let starts = quadrant_seeds(&curve, grid);
    let map = params.lhat();
    let mut loops = Vec::new();
    for &x0 in &starts {
        let scale = 1.0 + x0[0].abs() + x0[1].abs();
        if let Some((k, seg)) = find_periodic_orbit(params, x0, nmax, tol.orbit * scale) {
            if k >= 2 && seg.points.iter().all(|p| p[0] > 0.0 && p[1] > 0.0) {
                loops.push((k, x0));
            }
        }
    }
    let mut strings = Vec::new();
    let crossings = curve.axes_crossings();
    for r in [crossings.r_plus, crossings.r_minus].into_iter().flatten() {
        if !(r > tol.orbit) {
            continue;
        }
        let mut p = [r, 0.0];
        for k in 2..=nmax {
            p = map.apply(p);
            let scale = 1.0 + r + p[0].abs() + p[1].abs();
            if p[0].abs() <= tol.orbit * scale && p[1] > tol.orbit {
                strings.push((k, [r, 0.0]));
                break;
            }
            if !(p[0] > 0.0 && p[1] > 0.0) {
                break;
            }
        }
    }
    if params.is_invertible() {
        for n in 2..=nmax {
            if let Ok(Some(seg)) = find_kstring(params, n, tol.orbit) {
                let x = seg.points[0][0];
                if casimir_matches(x * x - params.a * x, chat1, x)
                    && !strings.iter().any(|(k, _)| *k == n)
                {
                    strings.push((n, [x, 0.0]));
                }
            }
        }
    }
    strings.sort_by_key(|(k, _)| *k);
    Ok(SearchReport {
        starts: starts.len(),
        loops,
        strings,
    })
}

struct TwoSidedScan {
    availability: Availability,
    seed: Option<Point>,
}

fn scan_two_sided(params: &AlgebraParams, curve: &ConstraintCurve) -> TwoSidedScan {
    let map = params.lhat();
    let inverse = match map.inverse() {
        Some(inv) => inv,
        None => {
            return TwoSidedScan {
                availability: Availability::Absent,
                seed: None,
            }
        }
    };
    let mut seeds = Vec::new();
    if let (Some(mu), Some(chat)) = (params.mu(), params.chat()) {
        if chat > 0.0 {
            let tip = mu + chat.sqrt();
            seeds.push([tip, tip]);
        }
    }
    seeds.extend(quadrant_seeds(curve, TWO_SIDED_SEEDS));
    // when ĉ = 0 the crossing lines of Γ are the stable and unstable lines
    // of the fix-point (μ, μ): every orbit on them tends to it one way
    let on_separatrix = matches!(
        (params.mu(), params.chat()),
        (Some(mu), Some(chat)) if chat.abs() <= EQ_TOL * (1.0 + mu * mu)
    );
    let mut limit_seed = None;
    for x0 in seeds {
        if !(x0[0] > 0.0 && x0[1] > 0.0) {
            continue;
        }
        // fix-points carry scalars, not two-sided windows
        if crate::dynamics::distance(map.apply(x0), x0) <= 1e-12 * (1.0 + x0[0] + x0[1]) {
            continue;
        }
        let forward = follow_ray(&map, x0, RAY_STEP_BUDGET);
        if !forward.survives() {
            continue;
        }
        let backward = follow_ray(&inverse, x0, RAY_STEP_BUDGET);
        if !backward.survives() {
            continue;
        }
        let converging = on_separatrix
            || matches!(forward, RayFate::Converges { .. })
            || matches!(backward, RayFate::Converges { .. });
        if !converging {
            return TwoSidedScan {
                availability: Availability::Present,
                seed: Some(x0),
            };
        }
        limit_seed.get_or_insert(x0);
    }
    TwoSidedScan {
        availability: if limit_seed.is_some() {
            Availability::LimitOnly
        } else {
            Availability::Absent
        },
        seed: limit_seed,
    }
}

/// Existence profile of `params` (which must carry `ĉ₁` and have
/// `det A = 1`). Without `cls` the class of the proxy surface
/// `(−a, Δ, ĉ₁/2)` is used; it has the same signs and `μ/√c`.
pub fn existence_profile(
    params: &AlgebraParams,
    cls: Option<&SurfaceClass>,
    ordering: Option<&OrderingSpec>,
    nmax: usize,
    tol: &Tolerances,
) -> Result<ExistenceProfile> {
    params.validate()?;
    if !params.is_det_one() {
        return Err(Error::UnsupportedRegime(format!(
            "existence profiles need det A = 1 (got {}); ĉ is undefined otherwise",
            params.det_a
        )));
    }
    let chat1 = chat1_of(params)?;
    let curve = ConstraintCurve::new(*params, chat1)?;
    let proxy;
    let cls = match cls {
        Some(c) => c,
        None => {
            proxy = classify_surface(&surface_proxy(params))?;
            &proxy
        }
    };
    let regime = regime(params);
    let theta = match params.rotation_angle() {
        Some(RotationAngle::Elliptic(t)) | Some(RotationAngle::Hyperbolic(t)) => Some(t),
        _ => None,
    };
    let mu = params.mu();
    let chat = params.chat();
    let scale = 1.0 + params.a * params.a + chat1.abs() + mu.map_or(0.0, |m| m * m);
    let mut witnesses = Vec::new();

    // one-dimensional representations
    let zero_rep = chat1.abs() <= EQ_TOL * scale;
    let scalar_family = params.delta_is_zero() && params.a == 0.0 && zero_rep;
    let fixed_point_scalar = match (mu, chat) {
        (Some(m), Some(c)) if m > 0.0 && c.abs() <= EQ_TOL * scale => Some(m),
        _ => None,
    };
    if zero_rep {
        witnesses.push("ĉ₁ = 0: W = 0 is a representation".to_string());
    }
    if let Some(d) = fixed_point_scalar {
        witnesses.push(format!(
            "ĉ = 0, μ = {d} > 0: scalar W = e^(iβ)√μ at the fix-point (μ, μ)"
        ));
    }
    if scalar_family {
        witnesses.push("tr A = 2, a = 0: every point (r, r) is a fix-point".to_string());
    }

    // loops
    let mut rational_angle = None;
    let mut loop_dims = Vec::new();
    let mut loop_witness = None;
    let mut kappa = None;
    if regime == Regime::Elliptic {
        let theta = theta.expect("elliptic");
        rational_angle = rational_approx(theta / std::f64::consts::PI, nmax as u64, ANGLE_TOL)
            .map(|(p, q)| [p, q]);
        match (mu, chat) {
            (Some(m), Some(c)) if c > EQ_TOL * scale => {
                let k = m * theta.cos() / c.sqrt();
                kappa = Some(k);
                if let Some([_, q]) = rational_angle {
                    let q = q as usize;
                    // r ≤ 0 on the arc |β − π| ≤ φ; L̂ advances β by 2θ, so an
                    // orbit meets the arc unless it is shorter than 2π/q
                    let phi = if k >= 1.0 { 0.0 } else { k.max(-1.0).acos() };
                    let feasible = k > 1.0 || (k > -1.0 && phi < std::f64::consts::PI / q as f64);
                    if feasible && q >= 2 {
                        let beta0 = if k > 1.0 {
                            0.0
                        } else {
                            std::f64::consts::PI * (1.0 + 1.0 / q as f64)
                        };
                        loop_witness = elliptic_parametrization(params, beta0).ok();
                        loop_dims = (1..).map(|j| j * q).take_while(|n| *n <= nmax).collect();
                        witnesses.push(format!(
                            "θ/π = {}/{}: e^(2inθ) = 1 for n ∈ {:?}",
                            rational_angle.unwrap()[0],
                            q,
                            loop_dims
                        ));
                    } else if q >= 2 {
                        witnesses.push(format!(
                            "every {q}-periodic orbit meets the arc where r ≤ 0 (μ/√ĉ = {:.6})",
                            m / c.sqrt()
                        ));
                    }
                }
            }
            _ => {}
        }
    } else {
        let search = exhaustive_search(params, nmax, 200, tol)?;
        let mut dims: Vec<usize> = search.loops.iter().map(|(k, _)| *k).collect();
        dims.sort_unstable();
        dims.dedup();
        if let Some((_, p)) = search.loops.first() {
            loop_witness = Some(*p);
        }
        loop_dims = dims;
        if loop_dims.is_empty() && regime != Regime::Reflecting {
            witnesses.push("Δ ≤ 0: L̂ has no periodic points other than fix-points".to_string());
        }
    }

    // strings
    let mut string_candidates = Vec::new();
    for n in 2..=nmax {
        if let Ok(Some(seg)) = find_kstring(params, n, tol.orbit) {
            let x = seg.points[0][0];
            let required = x * x - params.a * x;
            let c0_required =
                ordering.map(|o| required * o.denominator() / (4.0 * o.hbar * o.hbar));
            string_candidates.push(StringCandidate {
                n,
                x,
                chat1_required: required,
                c0_required,
                matches: casimir_matches(required, chat1, x),
            });
        }
    }
    let string_dims: Vec<usize> = string_candidates
        .iter()
        .filter(|c| c.matches)
        .map(|c| c.n)
        .collect();
    for c in string_candidates.iter().filter(|c| c.matches) {
        witnesses.push(format!(
            "{}-string from ({}, 0): ĉ₁ = x² − a x holds",
            c.n, c.x
        ));
    }

    // one-sided
    let mut one_sided_seeds = Vec::new();
    let one_sided;
    if regime == Regime::Elliptic {
        one_sided = Availability::Absent;
        witnesses.push(
            "bounded rotation: every ray returns to an axis or leaves the quadrant".to_string(),
        );
    } else {
        let map = params.lhat();
        let inverse = map.inverse();
        let crossings = curve.axes_crossings();
        let mut roots: Vec<f64> = [crossings.r_plus, crossings.r_minus]
            .into_iter()
            .flatten()
            .filter(|r| *r > tol.orbit)
            .collect();
        roots.dedup_by(|a, b| (*a - *b).abs() <= tol.orbit);
        for r in roots {
            one_sided_seeds.push(OneSidedSeed {
                start: [r, 0.0],
                reversed: false,
                fate: follow_ray(&map, [r, 0.0], RAY_STEP_BUDGET),
            });
            if let Some(inv) = &inverse {
                one_sided_seeds.push(OneSidedSeed {
                    start: [0.0, r],
                    reversed: true,
                    fate: follow_ray(inv, [0.0, r], RAY_STEP_BUDGET),
                });
            }
        }
        let survivors: Vec<&OneSidedSeed> = one_sided_seeds
            .iter()
            .filter(|s| s.fate.survives())
            .collect();
        one_sided = if survivors.is_empty() {
            Availability::Absent
        } else if survivors
            .iter()
            .all(|s| matches!(s.fate, RayFate::Converges { .. }))
        {
            Availability::LimitOnly
        } else {
            Availability::Present
        };
        if !survivors.is_empty() {
            witnesses.push(format!(
                "{} axis-crossing ray(s) stay in the open quadrant",
                survivors.len()
            ));
        }
    }

    // two-sided
    let (two_sided, two_sided_seed) = if regime == Regime::Elliptic {
        match kappa {
            Some(k) if k > 1.0 => {
                if rational_angle.is_some() {
                    (Availability::NeedsIrrationalAngle, None)
                } else {
                    let seed = elliptic_parametrization(params, 0.0).ok();
                    witnesses.push("Γ inside the open quadrant and θ/π irrational: orbits are dense and stay positive".into());
                    (Availability::Present, seed)
                }
            }
            _ => (Availability::Absent, None),
        }
    } else {
        let scan = scan_two_sided(params, &curve);
        (scan.availability, scan.seed)
    };

    let critical_torus = match (regime, mu, chat, theta) {
        (Regime::Elliptic, Some(m), Some(c), Some(t)) if c > 0.0 => {
            let ratio = m / c.sqrt();
            ratio > 1.0 + EQ_TOL && ratio <= 1.0 / t.cos() * (1.0 + EQ_TOL)
        }
        _ => false,
    };
    if critical_torus {
        witnesses.push("1 < μ/√ĉ ≤ 1/cos θ: strings and loops coexist".to_string());
    }

    let finite_loops = !loop_dims.is_empty();
    let finite_strings = !string_dims.is_empty();
    let has_scalar = zero_rep || fixed_point_scalar.is_some() || scalar_family;
    let scalar_only = has_scalar
        && !finite_loops
        && !finite_strings
        && !one_sided.exists()
        && !two_sided.exists();

    let mut profile = ExistenceProfile {
        code: cls.code,
        regime,
        theta,
        rational_angle,
        zero_rep,
        fixed_point_scalar,
        scalar_family,
        scalar_only,
        finite_loops,
        finite_strings,
        loop_dims,
        loop_witness,
        string_dims,
        string_candidates,
        one_sided,
        one_sided_seeds,
        two_sided,
        two_sided_seed,
        critical_torus,
        witnesses,
        rule_check: None,
    };
    profile.rule_check = rule_check(&profile, cls, params);
    Ok(profile)
}

/// Compares a computed profile with what the class of the surface predicts.
fn rule_check(
    p: &ExistenceProfile,
    cls: &SurfaceClass,
    params: &AlgebraParams,
) -> Option<RuleCheck> {
    use ClassCode::*;
    let no_finite = !p.finite_loops && !p.finite_strings;
    let (rule, agrees) = match cls.topology {
        Topology::Empty => ("empty surface: no representations", !p.has_any()),
        Topology::Point | Topology::Circle => ("no surface: scalars only", p.scalar_only),
        Topology::Sphere | Topology::SingularCompact => (
            "sphere: no loops, no one- or two-sided representations",
            !p.finite_loops && !p.one_sided.exists() && !p.two_sided.exists(),
        ),
        Topology::Torus if p.critical_torus => (
            "critical torus: no one-sided representations",
            !p.one_sided.exists(),
        ),
        Topology::Torus => (
            "non-critical torus: no strings, no one-sided representations",
            !p.finite_strings && !p.one_sided.exists(),
        ),
        Topology::TwoSheet => (
            "two sheets: two one-sided representations, nothing two-sided or finite",
            no_finite && p.surviving_one_sided() == 2 && p.two_sided == Availability::Absent,
        ),
        Topology::OneSheet => {
            let threshold =
                params.a > 0.0 && params.a * params.a + 4.0 * params.chat1.unwrap_or(0.0) >= 0.0;
            (
                "one sheet: two-sided representations; one-sided iff a > 0 and c ≤ μ²(1+|Δ|/4)",
                no_finite
                    && p.two_sided == Availability::Present
                    && p.one_sided.exists() == threshold,
            )
        }
        Topology::OneSheetSingular if cls.code == N6 => (
            "singular cone: two-sided representations approaching the singular point",
            no_finite && p.two_sided == Availability::LimitOnly,
        ),
        Topology::OneSheetSingular => (
            "singular sheet: two one-sided representations, nothing two-sided",
            no_finite && p.surviving_one_sided() == 2 && !p.two_sided.exists(),
        ),
        Topology::ConeAndSphereSingular => (
            "cone touching a sphere: two-sided representations in the limit only",
            !p.finite_loops && p.two_sided == Availability::LimitOnly,
        ),
        Topology::ConeAndPoint => (
            "cone and point: trivial representation and two-sided representations",
            p.zero_rep && p.two_sided == Availability::Present && !p.finite_loops,
        ),
        Topology::ConeAndSphere => (
            "cone and sphere: two-sided representations, strings from the compact part",
            p.two_sided == Availability::Present && !p.finite_loops,
        ),
        Topology::PlanePair if params.chat1.unwrap_or(0.0) == 0.0 => (
            "pair of planes with c₀ = 0: one-parameter family of scalars",
            p.scalar_family && no_finite,
        ),
        Topology::PlanePair => return None,
    };
    Some(RuleCheck {
        rule: rule.to_string(),
        agrees,
    })
}
