use proptest::prelude::*;
use stationary::phase::{
    jacobian_at, predicted_limit, regime_table, rhs_phase, unstable_manifold, PhaseState, StabilityClass,
};
use stationary::Alpha;

proptest! {
    #[test]
    fn jacobian_matches_central_differences(psi in -7.0..7.0f64, theta in -4.0..4.0f64, a in -8.0..4.0f64) {
        prop_assume!(a.abs() > 1e-3);
        let alpha = Alpha::new(a).unwrap();
        let s = PhaseState::new(psi, theta);
        let j = jacobian_at(&s, alpha);
        let h = 1e-5;
        for col in 0..2 {
            let (dp, dt) = if col == 0 { (h, 0.0) } else { (0.0, h) };
            let f1 = rhs_phase(&PhaseState::new(psi + dp, theta + dt), alpha);
            let f0 = rhs_phase(&PhaseState::new(psi - dp, theta - dt), alpha);
            for row in 0..2 {
                let fd = (f1[row] - f0[row]) / (2.0 * h);
                prop_assert!((fd - j[(row, col)]).abs() < 1e-6, "({row},{col}): {fd} vs {}", j[(row, col)]);
            }
        }
    }
}

#[test]
fn regime_table_is_constant_between_thresholds() {
    use StabilityClass::*;
    // representative classes per open interval; the boundary values are
    // covered by the unit tests of the phase module
    let intervals: [(f64, f64); 4] = [(-12.0, -4.0), (-4.0, -2.0), (-2.0, 0.0), (0.0, 6.0)];
    for (lo, hi) in intervals {
        let mid = regime_table(Alpha::new(0.5 * (lo + hi)).unwrap());
        for k in 1..40 {
            let a = lo + (hi - lo) * k as f64 / 40.0;
            let t = regime_table(Alpha::new(a).unwrap());
            assert_eq!(t, mid, "alpha {a} in ({lo}, {hi})");
            assert_eq!(t.p3, Saddle);
        }
    }
}

#[test]
fn unstable_manifold_reaches_its_predicted_limit() {
    for a in [1.0, 0.5, -0.5, -1.0, -1.8, -2.5, -3.0, -3.5, -4.5, -5.0, -7.0] {
        let alpha = Alpha::new(a).unwrap();
        let end = unstable_manifold(alpha, 1.0).unwrap().last();
        let target = predicted_limit(alpha).unwrap();
        assert!(end.distance(&target) < 1e-4, "alpha {a}: ends at {end:?}, expected {target:?}");
    }
}
