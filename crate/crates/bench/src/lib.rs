//! Parameter sets shared by the benchmarks.

use affrep::{AlgebraParams, Point};

/// Rotation number 11 around a unit-Casimir ellipse.
pub fn eleven_loop() -> (AlgebraParams, Point) {
    let p = AlgebraParams::new(1.6825070656623624, 1.0, 0.5)
        .with_chat(1.0)
        .expect("elliptic parameters");
    let curve = affrep::curve::ConstraintCurve::from_params(&p).expect("curve");
    let start = curve.nearest_point([1.56, 1.0]).expect("nearest point");
    (p, start)
}

/// Hyperbolic one-sheet parameters with a forward ray from the r-axis.
pub fn one_sheet() -> AlgebraParams {
    let s = affrep::bridge::SurfaceSpec::new(-1.0, -1.0, -0.01);
    let o = affrep::bridge::OrderingSpec {
        hbar: 0.3,
        beta1t: -0.25,
        gamma1t: -0.5,
        delta1t: -0.25,
    };
    affrep::bridge::algebra_from_surface(&s, &o).expect("bridge")
}
