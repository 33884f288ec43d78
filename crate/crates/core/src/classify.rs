//! Geometry of `C⁻¹(0)` for `C = (α₀/2)(x²+y²) + (α₁/4)(x²+y²)² + z²/2 − c₀/2`,
//! following the three decision tables on the signs of `α₁`, `α₀`, `c`
//! (or `c₀` when `α₁ = 0`) and the ratio `μ/√c`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bridge::SurfaceSpec;
use crate::error::{Error, Result};
use crate::tolerance::EQ_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassCode {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7,
    P8,
    P9,
    P10,
    Z1,
    Z2,
    Z3,
    Z4,
    Z5,
    Z6,
    Z7,
    Z8,
    N1,
    N2,
    N3,
    N4,
    N5,
    N6,
    N7,
    N8,
    N9,
    N10,
    N11,
    N12,
}

impl ClassCode {
    pub const ALL: [ClassCode; 30] = [
        ClassCode::P1,
        ClassCode::P2,
        ClassCode::P3,
        ClassCode::P4,
        ClassCode::P5,
        ClassCode::P6,
        ClassCode::P7,
        ClassCode::P8,
        ClassCode::P9,
        ClassCode::P10,
        ClassCode::Z1,
        ClassCode::Z2,
        ClassCode::Z3,
        ClassCode::Z4,
        ClassCode::Z5,
        ClassCode::Z6,
        ClassCode::Z7,
        ClassCode::Z8,
        ClassCode::N1,
        ClassCode::N2,
        ClassCode::N3,
        ClassCode::N4,
        ClassCode::N5,
        ClassCode::N6,
        ClassCode::N7,
        ClassCode::N8,
        ClassCode::N9,
        ClassCode::N10,
        ClassCode::N11,
        ClassCode::N12,
    ];

    fn parts(&self) -> (char, usize) {
        let idx = Self::ALL.iter().position(|c| c == self).expect("listed");
        match idx {
            0..=9 => ('P', idx + 1),
            10..=17 => ('Z', idx - 9),
            _ => ('N', idx - 17),
        }
    }

    pub fn geometry(&self) -> &'static str {
        use ClassCode::*;
        match self {
            P1 | P4 | P5 | Z1 | Z3 => "Empty set",
            P2 | P6 | Z4 => "Point {(0,0,0)}",
            P3 => "Circle x²+y² = |α₀|/α₁ in the plane z = 0",
            P7 | P8 | Z5 => "Sphere",
            P9 => "Surface with singularity",
            P10 => "Torus",
            Z2 => "Pair of planes z = ±√c₀",
            Z6 => "One sheeted hyperboloid",
            Z7 => "Singular hyperboloid",
            Z8 => "Two sheeted hyperboloid",
            N1 | N2 | N5 | N8 => "Two sheeted cone",
            N3 | N6 => "One sheeted singular cone",
            N4 | N7 | N10 => "One sheeted cone",
            N9 => "One sheeted cone ∪ sphere (singular)",
            N11 => "One sheeted cone ∪ {(0,0,0)}",
            N12 => "One sheeted cone ∪ sphere",
        }
    }

    /// The last column of the α₁ ≥ 0 tables.
    pub fn gamma_quadrant(&self) -> Option<&'static str> {
        use ClassCode::*;
        Some(match self {
            P1 | P4 | P5 | Z1 | Z3 => "∅",
            P2 | P6 | Z4 => "{(0,0)}",
            P3 => "{(|α₀|/α₁)(1,1)}",
            P7 | P8 | P9 | P10 => "{Ellipse} ∩ ℝ²≥0",
            Z5 => "Compact",
            Z2 | Z6 | Z7 | Z8 => "Non-compact",
            _ => return None,
        })
    }

    pub fn topology(&self) -> Topology {
        use ClassCode::*;
        match self {
            P1 | P4 | P5 | Z1 | Z3 => Topology::Empty,
            P2 | P6 | Z4 => Topology::Point,
            P3 => Topology::Circle,
            P7 | P8 | Z5 => Topology::Sphere,
            P9 => Topology::SingularCompact,
            P10 => Topology::Torus,
            Z2 => Topology::PlanePair,
            Z6 | N4 | N7 | N10 => Topology::OneSheet,
            Z7 | N3 | N6 => Topology::OneSheetSingular,
            Z8 | N1 | N2 | N5 | N8 => Topology::TwoSheet,
            N9 => Topology::ConeAndSphereSingular,
            N11 => Topology::ConeAndPoint,
            N12 => Topology::ConeAndSphere,
        }
    }
}

impl fmt::Display for ClassCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (letter, n) = self.parts();
        write!(f, "{letter}.{n}")
    }
}

impl FromStr for ClassCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassCode::ALL
            .iter()
            .copied()
            .find(|c| c.to_string() == s.trim())
            .ok_or_else(|| Error::InvalidInput(format!("unknown class code {s:?}")))
    }
}

impl Serialize for ClassCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Empty,
    Point,
    Circle,
    Sphere,
    SingularCompact,
    Torus,
    PlanePair,
    OneSheet,
    OneSheetSingular,
    TwoSheet,
    ConeAndSphereSingular,
    ConeAndPoint,
    ConeAndSphere,
}

impl Topology {
    /// `C⁻¹(0)` is empty, a point or a circle.
    pub fn is_degenerate(&self) -> bool {
        matches!(self, Topology::Empty | Topology::Point | Topology::Circle)
    }

    pub fn is_compact_surface(&self) -> bool {
        matches!(
            self,
            Topology::Sphere | Topology::SingularCompact | Topology::Torus
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceClass {
    pub code: ClassCode,
    pub geometry: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_quadrant: Option<&'static str>,
    pub topology: Topology,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_over_sqrt_c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Neg,
    Zero,
    Pos,
}

fn sign_exact(x: f64) -> Sign {
    if x > 0.0 {
        Sign::Pos
    } else if x < 0.0 {
        Sign::Neg
    } else {
        Sign::Zero
    }
}

fn sign_tol(x: f64, scale: f64) -> Sign {
    if x.abs() <= EQ_TOL * scale {
        Sign::Zero
    } else {
        sign_exact(x)
    }
}

/// Compares `μ/√c` with `target = ±1`.
fn ratio_cmp(ratio: f64, target: f64) -> Sign {
    sign_tol(ratio - target, 1.0)
}

/// Walks the decision tables; exact zero tests on the inputs, relative
/// tolerance `10⁻¹²` on the derived `c` and `μ/√c`.
pub fn classify_surface(s: &SurfaceSpec) -> Result<SurfaceClass> {
    s.validate()?;
    use ClassCode::*;
    let a0 = sign_exact(s.alpha0);
    let (mu, c) = (s.mu(), s.c());
    let mut ratio = None;
    let code = match sign_exact(s.alpha1) {
        Sign::Zero => match (a0, sign_exact(s.c0)) {
            (Sign::Zero, Sign::Neg) => Z1,
            (Sign::Zero, _) => Z2,
            (Sign::Pos, Sign::Neg) => Z3,
            (Sign::Pos, Sign::Zero) => Z4,
            (Sign::Pos, Sign::Pos) => Z5,
            (Sign::Neg, Sign::Neg) => Z6,
            (Sign::Neg, Sign::Zero) => Z7,
            (Sign::Neg, Sign::Pos) => Z8,
        },
        alpha1 => {
            let mu = mu.expect("α₁ ≠ 0");
            let c = c.expect("α₁ ≠ 0");
            let scale = (mu * mu).max((2.0 * s.c0 / s.alpha1).abs());
            let c_sign = sign_tol(c, scale);
            if c_sign == Sign::Pos {
                ratio = Some(mu / c.sqrt());
            }
            let r = ratio.unwrap_or(0.0);
            if alpha1 == Sign::Pos {
                match (c_sign, a0) {
                    (Sign::Neg, _) => P1,
                    (Sign::Zero, Sign::Zero) => P2,
                    (Sign::Zero, Sign::Neg) => P3,
                    (Sign::Zero, Sign::Pos) => P4,
                    (Sign::Pos, Sign::Zero) => P7,
                    (Sign::Pos, Sign::Pos) => match ratio_cmp(r, -1.0) {
                        Sign::Neg => P5,
                        Sign::Zero => P6,
                        Sign::Pos => P7,
                    },
                    (Sign::Pos, Sign::Neg) => match ratio_cmp(r, 1.0) {
                        Sign::Neg => P8,
                        Sign::Zero => P9,
                        Sign::Pos => P10,
                    },
                }
            } else {
                match (a0, c_sign) {
                    (Sign::Neg, Sign::Neg | Sign::Zero) => N1,
                    (Sign::Neg, Sign::Pos) => match ratio_cmp(r, -1.0) {
                        Sign::Neg => N2,
                        Sign::Zero => N3,
                        Sign::Pos => N4,
                    },
                    (Sign::Zero, Sign::Neg) => N5,
                    (Sign::Zero, Sign::Zero) => N6,
                    (Sign::Zero, Sign::Pos) => N7,
                    (Sign::Pos, Sign::Neg) => N8,
                    (Sign::Pos, Sign::Zero) => N9,
                    (Sign::Pos, Sign::Pos) => match ratio_cmp(r, 1.0) {
                        Sign::Neg => N10,
                        Sign::Zero => N11,
                        Sign::Pos => N12,
                    },
                }
            }
        }
    };
    Ok(SurfaceClass {
        code,
        geometry: code.geometry(),
        gamma_quadrant: code.gamma_quadrant(),
        topology: code.topology(),
        mu,
        c,
        mu_over_sqrt_c: ratio,
    })
}

/// One-dimensional representations of the degenerate classes, as moduli
/// `|W|` (any phase): none for the empty set, `0` for the point and
/// `√(|α₀|/|α₁|)` for the circle.
pub fn degenerate_reps(cls: &SurfaceClass, s: &SurfaceSpec) -> Result<Vec<f64>> {
    match cls.topology {
        Topology::Empty => Ok(vec![]),
        Topology::Point => Ok(vec![0.0]),
        Topology::Circle => Ok(vec![(s.alpha0.abs() / s.alpha1.abs()).sqrt()]),
        _ => Err(Error::InvalidInput(format!(
            "{} is a surface, not a degenerate case",
            cls.code
        ))),
    }
}
