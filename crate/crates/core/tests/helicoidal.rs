use proptest::prelude::*;
use stationary::arclength::CurveState;
use stationary::verifiers::helicoidal::{cleared_residual, helicoidal_sample, shrinker_coefficients, Equation};
use stationary::verifiers::{circle_arc_profile, helicoidal_coefficients, HelicoidalParams};
use stationary::{Alpha, Point3};

fn alpha() -> impl Strategy<Value = Alpha> {
    prop_oneof![-6.0..-0.1f64, 0.1..3.0f64].prop_map(|a| Alpha::new(a).unwrap())
}

fn state() -> impl Strategy<Value = CurveState> {
    (0.2..3.0f64, -2.0..2.0f64, -3.0..3.0f64, -2.0..2.0f64).prop_map(|(x, z, psi, dpsi)| CurveState {
        s: 0.0,
        x,
        z,
        psi,
        dpsi,
    })
}

/// `(H·N)` from the first and second fundamental forms of
/// `Φ(s, t) = (q1 + x cos t, x sin t, z + h t)`, with `H = k1 + k2`.
fn mean_curvature_vector(q1: f64, h: f64, c: &CurveState, t: f64) -> (Point3, Point3) {
    let (st, ct) = t.sin_cos();
    let (sp, cp) = c.psi.sin_cos();
    let x = c.x;
    let phi = Point3::new(q1 + x * ct, x * st, c.z + h * t);
    let ps = Point3::new(cp * ct, cp * st, sp);
    let pt = Point3::new(-x * st, x * ct, h);
    let pss = Point3::new(-sp * ct, -sp * st, cp) * c.dpsi;
    let pst = Point3::new(-cp * st, cp * ct, 0.0);
    let ptt = Point3::new(-x * ct, -x * st, 0.0);
    let n = ps.cross(&pt).normalize();
    let (e, f, g) = (ps.dot(&ps), ps.dot(&pt), pt.dot(&pt));
    let (l, m, nn) = (pss.dot(&n), pst.dot(&n), ptt.dot(&n));
    let hm = (l * g - 2.0 * m * f + nn * e) / (e * g - f * f);
    (phi, n * hm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closed_form_matches_fundamental_forms(q1 in -2.0..2.0f64, h in -2.0..2.0f64, c in state(), t in -7.0..7.0f64) {
        let s = helicoidal_sample(q1, h, &c, t).unwrap();
        let (p, hn) = mean_curvature_vector(q1, h, &c, t);
        prop_assert!((s.position - p).norm() < 1e-12 * (1.0 + p.norm()));
        prop_assert!((s.normal.norm() - 1.0).abs() < 1e-14);
        let scale = 1.0 + hn.norm();
        prop_assert!((s.normal * s.mean_curvature - hn).norm() < 1e-10 * scale, "{} vs {}", s.normal * s.mean_curvature, hn);
    }

    #[test]
    fn coefficients_reconstruct_the_residual(
        q1 in -2.0..2.0f64, h in -2.0..2.0f64, a in alpha(),
        x0 in 0.5..2.0f64, psi0 in -1.2..1.2f64, kappa in -0.3..0.3f64,
        ts in proptest::collection::vec(-10.0..10.0f64, 20),
    ) {
        let params = HelicoidalParams::new(q1, h, circle_arc_profile(x0, psi0, kappa, 1.0, 21)).unwrap();
        for (eq, co) in [
            (Equation::WeightedArea, helicoidal_coefficients(&params, a).unwrap()),
            (Equation::Shrinker, shrinker_coefficients(&params, a).unwrap()),
        ] {
            for (i, &t) in ts.iter().enumerate() {
                let i = i % params.profile.len();
                let direct = cleared_residual(&params, i, t, a, eq).unwrap();
                let terms = [1.0, t, t * t, t.sin(), t.cos()];
                let scale: f64 = (0..5).map(|k| (co.get(k)[i] * terms[k]).abs()).sum::<f64>() + 1.0;
                prop_assert!((co.reconstruct(i, t) - direct).abs() < 5e-9 * scale, "{eq:?} t = {t}");
            }
        }
    }

    #[test]
    fn zero_pitch_is_a_surface_of_revolution(c in state(), t in -7.0..7.0f64) {
        let s = helicoidal_sample(0.0, 0.0, &c, t).unwrap();
        let expected = c.dpsi + c.psi.sin() / c.x;
        prop_assert!((s.mean_curvature - expected).abs() < 1e-10 * (1.0 + expected.abs()));
    }
}
