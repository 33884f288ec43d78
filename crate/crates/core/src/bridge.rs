//! Conversion between surface data `(α₀, α₁, c₀)` with an ordering choice
//! and algebra data `(a, tr A, det A, ĉ₁)`, and the coefficients of the
//! homomorphism ψ from `A_L` to `C_{L,a}`.

use serde::{Deserialize, Serialize};

use crate::dynamics::AffineMap2;
use crate::error::{Error, Result};
use crate::params::AlgebraParams;
use crate::tolerance::{near_zero, EQ_TOL};

/// Coefficients of `C = (α₀/2)(x²+y²) + (α₁/4)(x²+y²)² + z²/2 − c₀/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub alpha0: f64,
    pub alpha1: f64,
    pub c0: f64,
}

impl SurfaceSpec {
    pub fn new(alpha0: f64, alpha1: f64, c0: f64) -> Self {
        Self { alpha0, alpha1, c0 }
    }

    pub fn validate(&self) -> Result<()> {
        if [self.alpha0, self.alpha1, self.c0]
            .iter()
            .all(|v| v.is_finite())
        {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "surface coefficients must be finite".into(),
            ))
        }
    }

    /// `μ = −α₀/α₁`.
    pub fn mu(&self) -> Option<f64> {
        (self.alpha1 != 0.0).then(|| -self.alpha0 / self.alpha1)
    }

    /// `c = α₀²/α₁² + 2c₀/α₁`.
    pub fn c(&self) -> Option<f64> {
        (self.alpha1 != 0.0).then(|| {
            self.alpha0 * self.alpha0 / (self.alpha1 * self.alpha1) + 2.0 * self.c0 / self.alpha1
        })
    }
}

/// Quantization choices `ħ, β̃₁, γ̃₁, δ̃₁` with `β̃₁ + γ̃₁ + δ̃₁ = α₁`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderingSpec {
    pub hbar: f64,
    pub beta1t: f64,
    pub gamma1t: f64,
    pub delta1t: f64,
}

impl OrderingSpec {
    /// `β̃₁ = δ̃₁ = α₁/4`, `γ̃₁ = α₁/2`; forces `det A = 1`.
    pub fn symmetric(alpha1: f64, hbar: f64) -> Self {
        Self {
            hbar,
            beta1t: alpha1 / 4.0,
            gamma1t: alpha1 / 2.0,
            delta1t: alpha1 / 4.0,
        }
    }

    /// `1 + 2ħ²δ̃₁`.
    pub fn denominator(&self) -> f64 {
        1.0 + 2.0 * self.hbar * self.hbar * self.delta1t
    }

    /// `t² = (1 + 2ħ²δ̃₁ − ½ħ²α₁)/(4ħ²)`.
    pub fn t_squared(&self, alpha1: f64) -> f64 {
        let h2 = self.hbar * self.hbar;
        (self.denominator() - 0.5 * h2 * alpha1) / (4.0 * h2)
    }

    fn check_denominator(&self) -> Result<f64> {
        let d = self.denominator();
        if d.abs() < EQ_TOL {
            return Err(Error::DegenerateOrdering { denominator: d });
        }
        Ok(d)
    }

    /// Checks the ordering against a surface.
    pub fn validate_for(&self, s: &SurfaceSpec) -> Result<()> {
        let finite = [self.hbar, self.beta1t, self.gamma1t, self.delta1t]
            .iter()
            .all(|v| v.is_finite());
        if !finite || !(self.hbar > 0.0) {
            return Err(Error::InvalidInput(
                "ħ must be positive and ordering data finite".into(),
            ));
        }
        let sum = self.beta1t + self.gamma1t + self.delta1t;
        if (sum - s.alpha1).abs() > 1e-10 * s.alpha1.abs().max(1.0) {
            return Err(Error::InvalidInput(format!(
                "β̃₁ + γ̃₁ + δ̃₁ = {sum} differs from α₁ = {}",
                s.alpha1
            )));
        }
        self.check_denominator()?;
        if !(self.t_squared(s.alpha1) > 0.0) {
            return Err(Error::InvalidInput("ordering gives t² ≤ 0".into()));
        }
        Ok(())
    }
}

/// Algebra parameters of the quantized surface; `ĉ₁` is set from `ĉ₀ = c₀`.
pub fn algebra_from_surface(s: &SurfaceSpec, o: &OrderingSpec) -> Result<AlgebraParams> {
    s.validate()?;
    o.validate_for(s)?;
    let d = o.denominator();
    let h2 = o.hbar * o.hbar;
    let params = AlgebraParams::new(
        (2.0 - 2.0 * h2 * o.gamma1t) / d,
        (1.0 + 2.0 * h2 * o.beta1t) / d,
        -2.0 * s.alpha0 * h2 / d,
    );
    Ok(params.with_chat1(4.0 * h2 * s.c0 / d))
}

/// Inverse of [`algebra_from_surface`] on `(α₀, α₁)`; `c₀` is recovered from
/// `ĉ₁` when present and is zero otherwise.
pub fn surface_from_algebra(params: &AlgebraParams, o: &OrderingSpec) -> Result<SurfaceSpec> {
    params.validate()?;
    let d = o.check_denominator()?;
    let h2 = o.hbar * o.hbar;
    if !(h2 > 0.0) {
        return Err(Error::InvalidInput("ħ must be nonzero".into()));
    }
    Ok(SurfaceSpec {
        alpha0: -params.a * d / (2.0 * h2),
        alpha1: params.delta() * d / (2.0 * h2),
        c0: params.chat1.map_or(0.0, |chat1| chat1 * d / (4.0 * h2)),
    })
}

/// Surface with the same classification as `params` when the ordering
/// denominator is positive: `(−a, Δ, ĉ₁/2)`, i.e. the surface for `2ħ² = d`.
pub fn surface_proxy(params: &AlgebraParams) -> SurfaceSpec {
    SurfaceSpec {
        alpha0: -params.a,
        alpha1: params.delta(),
        c0: params.chat1.unwrap_or(0.0) / 2.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CasimirConstants {
    pub chat1: f64,
    /// `ĉ = μ² + 2ĉ₀/α₁`; undefined when `α₁ = 0`.
    pub chat: Option<f64>,
}

pub fn casimir_constants(
    s: &SurfaceSpec,
    o: &OrderingSpec,
    chat0: f64,
) -> Result<CasimirConstants> {
    let d = o.check_denominator()?;
    let chat1 = 4.0 * o.hbar * o.hbar * chat0 / d;
    let chat = s.mu().map(|mu| mu * mu + 2.0 * chat0 / s.alpha1);
    Ok(CasimirConstants { chat1, chat })
}

/// `ψ(E) = k·1 + m·WV + n·VW`, `ψ(Ẽ) = k̃·1 + m̃·WV + ñ·VW`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiCoefficients {
    pub k: f64,
    pub kt: f64,
    pub m: f64,
    pub n: f64,
    pub mt: f64,
    pub nt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiBranch {
    /// `a ≠ 0`, `k = k̃ = 0`, `m = u/a`, `m̃ = v/a`.
    Simple,
    /// `Δ ≠ 0`: unique `(k, k̃)` for the chosen `(m, m̃)`.
    Unique,
    /// `Δ = 0`: rank-deficient system with a consistency condition.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiSolution {
    pub coefficients: PsiCoefficients,
    pub branch: PsiBranch,
}

/// Solves for the coefficients of ψ given `L` and `a`.
///
/// `free` fixes `(m, m̃)`; without it the simple solution is used when
/// `a ≠ 0` and `(m, m̃) = (1, 0)` otherwise. `(n, ñ)` then follow from
/// `n = βm̃ − δm`, `ñ = γm − αm̃`, and `(k, k̃)` from
/// `(A − 1)(k, k̃) = (ma − u, m̃a − v)`.
pub fn psi_coefficients(l: &AffineMap2, a: f64, free: Option<[f64; 2]>) -> Result<PsiSolution> {
    if !l.is_finite() || !a.is_finite() {
        return Err(Error::InvalidInput("ψ needs finite L and a".into()));
    }
    let (alpha, beta, gamma, delta) = (l.a11, l.a12, l.a21, l.a22);
    let (u, v) = (l.t1, l.t2);
    let a_zero = near_zero(a, 1.0);
    let [m, mt] = match free {
        Some(mm) => mm,
        None if !a_zero => [u / a, v / a],
        None => [1.0, 0.0],
    };
    let n = beta * mt - delta * m;
    let nt = gamma * m - alpha * mt;
    let b = [m * a - u, mt * a - v];

    let p = alpha - 1.0;
    let q = delta - 1.0;
    let det = p * q - beta * gamma;
    let scale = p.abs().max(q.abs()).max(beta.abs()).max(gamma.abs());
    let coeffs = |k: f64, kt: f64| PsiCoefficients {
        k,
        kt,
        m,
        n,
        mt,
        nt,
    };

    if free.is_none() && !a_zero {
        return Ok(PsiSolution {
            coefficients: coeffs(0.0, 0.0),
            branch: PsiBranch::Simple,
        });
    }
    if !near_zero(det, scale * scale) {
        let k = (b[0] * q - beta * b[1]) / det;
        let kt = (p * b[1] - gamma * b[0]) / det;
        return Ok(PsiSolution {
            coefficients: coeffs(k, kt),
            branch: PsiBranch::Unique,
        });
    }

    let bscale = scale.max(b[0].abs()).max(b[1].abs()).max(1.0);
    let holds = |lhs: f64, rhs: f64| near_zero(lhs - rhs, bscale * bscale);
    let degenerate = |k: f64, kt: f64| {
        Ok(PsiSolution {
            coefficients: coeffs(k, kt),
            branch: PsiBranch::Degenerate,
        })
    };
    if near_zero(scale, 1.0) {
        // A = 1
        if near_zero(b[0], 1.0) && near_zero(b[1], 1.0) {
            return degenerate(0.0, 0.0);
        }
        return Err(Error::Inconsistent(format!(
            "A = I requires u = v = 0 (right-hand side ({}, {}))",
            b[0], b[1]
        )));
    }
    let first_row = !near_zero(p, 1.0) || !near_zero(gamma, 1.0);
    if first_row {
        // column (p, γ) spans the image: need p·b₂ = γ·b₁, i.e. (α−1)v = γu when Δ = a = 0
        if !holds(p * b[1], gamma * b[0]) {
            return Err(Error::Inconsistent(format!(
                "condition (α−1)v = γu fails: {} ≠ {}",
                -p * b[1],
                -gamma * b[0]
            )));
        }
        let k = if !near_zero(p, 1.0) {
            b[0] / p
        } else {
            b[1] / gamma
        };
        return degenerate(k, 0.0);
    }
    // p = γ = 0: the image is spanned by (β, q)
    if !holds(q * b[0], beta * b[1]) {
        return Err(Error::Inconsistent(format!(
            "condition (δ−1)u = βv fails: {} ≠ {}",
            -q * b[0],
            -beta * b[1]
        )));
    }
    let kt = if !near_zero(q, 1.0) {
        b[1] / q
    } else {
        b[0] / beta
    };
    degenerate(0.0, kt)
}

/// Max-entry residual of `A·M − M·((tr A, −det A), (1, 0))` with
/// `M = ((m, n), (m̃, ñ))`.
pub fn intertwining_residual(l: &AffineMap2, psi: &PsiCoefficients) -> f64 {
    let a = l.matrix();
    let m = [[psi.m, psi.n], [psi.mt, psi.nt]];
    let c = [[l.trace(), -l.det()], [1.0, 0.0]];
    let mut worst = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            let am: f64 = (0..2).map(|k| a[i][k] * m[k][j]).sum();
            let mc: f64 = (0..2).map(|k| m[i][k] * c[k][j]).sum();
            worst = worst.max((am - mc).abs());
        }
    }
    worst
}

/// Max-entry residual of `(A − 1)(k, k̃) − M(a, 0) + (u, v)`.
pub fn translation_residual(l: &AffineMap2, a: f64, psi: &PsiCoefficients) -> f64 {
    let lhs = [
        (l.a11 - 1.0) * psi.k + l.a12 * psi.kt,
        l.a21 * psi.k + (l.a22 - 1.0) * psi.kt,
    ];
    let rhs = [psi.m * a - l.t1, psi.mt * a - l.t2];
    (lhs[0] - rhs[0]).abs().max((lhs[1] - rhs[1]).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_sided_surface() -> (SurfaceSpec, OrderingSpec) {
        // c = α₀²/α₁² + 2c₀/α₁ = 1 − 2c₀ = 1.02
        let s = SurfaceSpec::new(-1.0, -1.0, -0.01);
        let o = OrderingSpec {
            hbar: 0.3,
            beta1t: -0.25,
            gamma1t: -0.5,
            delta1t: -0.25,
        };
        (s, o)
    }

    #[test]
    fn one_sided_example_parameters() {
        let (s, o) = one_sided_surface();
        assert!((s.c().unwrap() - 1.02).abs() < 1e-14);
        let p = algebra_from_surface(&s, &o).unwrap();
        assert!((p.a - 0.188_481_675).abs() < 1e-8);
        assert_eq!(p.det_a, 1.0);
        assert!((p.tr_a - 2.188_481_675).abs() < 1e-8);
        assert!((p.delta() + 0.188_481_675).abs() < 1e-8);
        assert!((p.mu().unwrap() + 1.0).abs() < 1e-12);
        assert!((p.chat().unwrap() - 1.02).abs() < 1e-12);
    }

    #[test]
    fn equal_beta_delta_gives_unit_determinant() {
        for hbar in [0.01, 0.3, 1.2] {
            let s = SurfaceSpec::new(0.3, 1.2, 0.0);
            let o = OrderingSpec {
                hbar,
                beta1t: 0.1,
                gamma1t: 1.0,
                delta1t: 0.1,
            };
            assert_eq!(algebra_from_surface(&s, &o).unwrap().det_a, 1.0);
        }
    }

    #[test]
    fn eleven_dim_inversion() {
        let theta = std::f64::consts::PI / 11.0;
        let hbar = theta.tan();
        let params = AlgebraParams::elliptic(theta, 0.5);
        let o = OrderingSpec {
            hbar,
            beta1t: 0.5,
            gamma1t: 1.0,
            delta1t: 0.5,
        };
        let s = surface_from_algebra(&params, &o).unwrap();
        assert!((s.mu().unwrap() - params.mu().unwrap()).abs() < 1e-12);
        assert!((s.mu().unwrap() - 1.5748).abs() < 1e-4);
        assert!((s.alpha1 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_ordering() {
        let s = SurfaceSpec::new(1.0, -2.0, 0.0);
        let o = OrderingSpec {
            hbar: 1.0,
            beta1t: -1.0,
            gamma1t: -0.5,
            delta1t: -0.5,
        };
        assert!(matches!(
            algebra_from_surface(&s, &o),
            Err(Error::DegenerateOrdering { .. })
        ));
        assert!(matches!(
            casimir_constants(&s, &o, 0.1),
            Err(Error::DegenerateOrdering { .. })
        ));
    }

    #[test]
    fn ordering_sum_is_checked() {
        let s = SurfaceSpec::new(1.0, 1.0, 0.0);
        let o = OrderingSpec::symmetric(2.0, 0.5);
        assert!(matches!(
            algebra_from_surface(&s, &o),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn casimir_constants_routes_agree() {
        let (s, o) = one_sided_surface();
        let zero = casimir_constants(&s, &o, 0.0).unwrap();
        assert_eq!(zero.chat1, 0.0);
        assert_eq!(zero.chat.unwrap(), 1.0);
        let cc = casimir_constants(&s, &o, s.c0).unwrap();
        assert!((cc.chat.unwrap() - 1.02).abs() < 1e-12);
        assert!((cc.chat1 + 0.003_769_6).abs() < 1e-7);
        let params = algebra_from_surface(&s, &o).unwrap();
        assert!((params.chat().unwrap() - cc.chat.unwrap()).abs() < 1e-10);
        let flat = SurfaceSpec::new(-1.0, 0.0, 0.2);
        assert!(
            casimir_constants(&flat, &OrderingSpec::symmetric(0.0, 0.3), 0.2)
                .unwrap()
                .chat
                .is_none()
        );
    }

    #[test]
    fn psi_simple_branch_identity_matrix() {
        let l = AffineMap2::new([[1.0, 0.0], [0.0, 1.0]], [1.0, 0.0]);
        let sol = psi_coefficients(&l, 1.0, None).unwrap();
        assert_eq!(sol.branch, PsiBranch::Simple);
        let c = sol.coefficients;
        assert_eq!(
            (c.k, c.kt, c.m, c.n, c.mt, c.nt),
            (0.0, 0.0, 1.0, -1.0, 0.0, 0.0)
        );
    }

    #[test]
    fn psi_identity_map() {
        let sol = psi_coefficients(&AffineMap2::identity(), 0.0, None).unwrap();
        assert_eq!(sol.branch, PsiBranch::Degenerate);
        assert_eq!((sol.coefficients.k, sol.coefficients.kt), (0.0, 0.0));
        let shifted = AffineMap2::new([[1.0, 0.0], [0.0, 1.0]], [0.0, 1.0]);
        let err = psi_coefficients(&shifted, 0.0, None).unwrap_err();
        assert!(err.to_string().contains("A = I"));
    }

    #[test]
    fn psi_degenerate_consistency() {
        // tr A = 1 + det A with α ≠ 1
        let l = AffineMap2::new([[2.0, 1.0], [0.0, 1.0]], [1.0, 2.0]);
        let err = psi_coefficients(&l, 0.0, None).unwrap_err();
        assert!(err.to_string().contains("(α−1)v = γu"));
        let l = AffineMap2::new([[2.0, 1.0], [0.0, 1.0]], [1.0, 0.0]);
        let sol = psi_coefficients(&l, 0.0, None).unwrap();
        assert!(translation_residual(&l, 0.0, &sol.coefficients) < 1e-14);
        assert!(intertwining_residual(&l, &sol.coefficients) < 1e-14);
    }

    #[test]
    fn psi_unique_branch_solves_system() {
        let l = AffineMap2::new([[0.3, -1.2], [0.7, 2.0]], [0.4, -0.9]);
        let sol = psi_coefficients(&l, 0.6, Some([0.25, -1.5])).unwrap();
        assert_eq!(sol.branch, PsiBranch::Unique);
        assert!(translation_residual(&l, 0.6, &sol.coefficients) < 1e-12);
        assert!(intertwining_residual(&l, &sol.coefficients) < 1e-12);
    }
}
