use std::f64::consts::PI;

use affrep::bridge::{algebra_from_surface, surface_proxy, OrderingSpec, SurfaceSpec};
use affrep::classify::classify_surface;
use affrep::curve::ConstraintCurve;
use affrep::dynamics::{elliptic_parametrization, hyperbolic_parametrization, Branch};
use affrep::export::round_sig;
use affrep::rep::{build_loop, verify_relations};
use affrep::{AlgebraParams, Tolerances};
use proptest::prelude::*;

fn curve_value(p: &AlgebraParams, x: [f64; 2]) -> f64 {
    let (u, v) = (x[0] + x[1], x[0] - x[1]);
    (2.0 - p.tr_a) * u * u + (2.0 + p.tr_a) * v * v - 4.0 * p.a * u - 4.0 * p.chat1.unwrap()
}

fn coeff() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), -3.0..3.0f64]
}

proptest! {
    #[test]
    fn classifier_is_total(a0 in coeff(), a1 in coeff(), c0 in coeff()) {
        let cls = classify_surface(&SurfaceSpec::new(a0, a1, c0)).unwrap();
        let letter = cls.code.to_string().chars().next().unwrap();
        let want = if a1 > 0.0 { 'P' } else if a1 == 0.0 { 'Z' } else { 'N' };
        prop_assert_eq!(letter, want);
        prop_assert_eq!(cls.topology, cls.code.topology());
    }

    #[test]
    fn proxy_keeps_the_class(a0 in coeff(), a1 in -3.0..3.0f64, c0 in coeff(), hbar in 0.01..0.5f64) {
        prop_assume!(a1.abs() > 1e-3);
        let s = SurfaceSpec::new(a0, a1, c0);
        let o = OrderingSpec::symmetric(a1, hbar);
        let Ok(params) = algebra_from_surface(&s, &o) else { return Ok(()) };
        prop_assume!(o.denominator() > 0.0);
        let direct = classify_surface(&s).unwrap().code;
        let proxy = classify_surface(&surface_proxy(&params)).unwrap().code;
        prop_assert_eq!(direct, proxy);
    }

    #[test]
    fn lhat_preserves_the_curve(tr in -1.9..6.0f64, a in -2.0..2.0f64, c1 in -2.0..2.0f64, x in 0.0..3.0f64, y in 0.0..3.0f64) {
        let p = AlgebraParams::new(tr, 1.0, a).with_chat1(c1);
        let q = p.lhat().apply([x, y]);
        let before = curve_value(&p, [x, y]);
        let after = curve_value(&p, q);
        prop_assert!((before - after).abs() <= 1e-9 * (1.0 + before.abs() + q[0] * q[0] + q[1] * q[1]));
    }

    #[test]
    fn samples_lie_on_the_curve(tr in -1.9..6.0f64, a in -2.0..2.0f64, c1 in -2.0..2.0f64) {
        let p = AlgebraParams::new(tr, 1.0, a).with_chat1(c1);
        let Ok(curve) = ConstraintCurve::from_params(&p) else { return Ok(()) };
        for s in curve.sample(64).unwrap_or_default() {
            let scale = 1.0 + s.r * s.r + s.s * s.s;
            prop_assert!(curve_value(&p, [s.r, s.s]).abs() <= 1e-8 * scale, "{:?}", s);
        }
    }

    #[test]
    fn nearest_point_is_on_the_curve(theta in 0.05..1.5f64, mu in 0.5..3.0f64, tx in -1.0..4.0f64, ty in -1.0..4.0f64) {
        let delta = 4.0 * theta.sin().powi(2);
        let p = AlgebraParams::elliptic(theta, mu * delta).with_chat(mu * mu).unwrap();
        let curve = ConstraintCurve::from_params(&p).unwrap();
        let x = curve.nearest_point([tx, ty]).unwrap();
        prop_assert!(curve_value(&p, x).abs() <= 1e-8 * (1.0 + x[0] * x[0] + x[1] * x[1]));
    }

    #[test]
    fn parametrizations_shift_by_two_theta(theta in 0.05..1.5f64, mu in -2.0..2.0f64, chat in 0.1..4.0f64, beta in -6.0..6.0f64) {
        let e = AlgebraParams::elliptic(theta, mu * 4.0 * theta.sin().powi(2)).with_chat(chat).unwrap();
        let x = elliptic_parametrization(&e, beta).unwrap();
        let y = elliptic_parametrization(&e, beta + 2.0 * theta).unwrap();
        let q = e.lhat().apply(x);
        prop_assert!((q[0] - y[0]).abs() < 1e-9 && (q[1] - y[1]).abs() < 1e-9);

        let h = AlgebraParams::hyperbolic(theta.min(1.0), -mu * 4.0 * theta.min(1.0).sinh().powi(2)).with_chat(chat).unwrap();
        for branch in [Branch::Upper, Branch::Lower] {
            let x = hyperbolic_parametrization(&h, beta.clamp(-3.0, 3.0), branch).unwrap();
            let y = hyperbolic_parametrization(&h, beta.clamp(-3.0, 3.0) + 2.0 * theta.min(1.0), branch).unwrap();
            let q = h.lhat().apply(x);
            let scale = 1.0 + y[0].abs() + y[1].abs();
            prop_assert!((q[0] - y[0]).abs() < 1e-9 * scale && (q[1] - y[1]).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn loops_satisfy_the_relations(q in 3usize..10, mu in 0.5..3.0f64, ratio in 0.1..0.9f64, start in 0.0..6.3f64, beta in -3.0..3.0f64) {
        let theta = PI / q as f64;
        let p = AlgebraParams::elliptic(theta, mu * 4.0 * theta.sin().powi(2))
            .with_chat((mu * theta.cos() * ratio).powi(2))
            .unwrap();
        let x1 = elliptic_parametrization(&p, start).unwrap();
        let rep = build_loop(&p, x1, q, beta, &Tolerances::default()).unwrap();
        prop_assert_eq!(rep.dim(), q);
        prop_assert!(verify_relations(&rep).passes(1e-10));
        prop_assert!(rep.orbit.points.iter().all(|x| x[0] > 0.0 && x[1] > 0.0));
    }

    #[test]
    fn rounding_is_idempotent(x in proptest::num::f64::NORMAL) {
        let once = round_sig(x);
        prop_assert_eq!(round_sig(once), once);
        prop_assert!((once - x).abs() <= 1e-11 * x.abs());
    }
}
