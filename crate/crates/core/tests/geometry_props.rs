use nalgebra::{Rotation3, Vector3};
use proptest::prelude::*;
use stationary::geometry::{
    cylinder_weighted_h, laplacian_norm_identity, rotate_about_origin, sphere_weighted_h, stationary_residual,
    Similarity,
};
use stationary::{Alpha, Point3, SurfaceSample};

fn alpha() -> impl Strategy<Value = Alpha> {
    prop_oneof![-8.0..-1e-3f64, 1e-3..8.0f64].prop_map(|a| Alpha::new(a).unwrap())
}

fn direction() -> impl Strategy<Value = Point3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-2)
        .prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn sample() -> impl Strategy<Value = SurfaceSample> {
    (direction(), direction(), -3.0..3.0f64, -3.0..3.0f64, 0.1..5.0f64)
        .prop_map(|(p, n, k1, k2, scale)| SurfaceSample::new(p * scale, n, k1, k2).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sphere_formula_matches_residual(r in 0.05..20.0f64, a in alpha(), d in direction()) {
        let s = SurfaceSample::on_sphere(Point3::zeros(), r, d).unwrap();
        let res = stationary_residual(&s, a).unwrap();
        let expected = sphere_weighted_h(r, a).unwrap();
        prop_assert!((res - expected).abs() < 1e-12 * (1.0 + expected.abs()));
    }

    #[test]
    fn cylinder_formula_matches_residual(r in 0.05..20.0f64, z in -10.0..10.0f64, a in alpha(), t in 0.0..6.3f64) {
        let s = SurfaceSample::on_cylinder(Point3::zeros(), Point3::z(), r, t, z).unwrap();
        let res = stationary_residual(&s, a).unwrap();
        let expected = cylinder_weighted_h(r, z, a).unwrap();
        prop_assert!((res - expected).abs() < 1e-12 * (1.0 + expected.abs()));
    }

    #[test]
    fn laplacian_identity_on_stationary_samples(p in direction(), n in direction(), scale in 0.1..5.0f64, a in alpha()) {
        // choose H so that the sample solves the equation exactly
        let pos = p * scale;
        let nu = n.normalize();
        let h = a.value() * nu.dot(&pos) / pos.norm_squared();
        let s = SurfaceSample::with_mean_curvature(pos, nu, h).unwrap();
        prop_assert!(stationary_residual(&s, a).unwrap().abs() < 1e-12);
        let (lhs, rhs) = laplacian_norm_identity(&s, a).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn dilations_compose(s in sample(), l1 in 0.01..100.0f64, l2 in 0.01..100.0f64) {
        let a = s.dilate(l1).unwrap().dilate(l2).unwrap();
        let b = s.dilate(l1 * l2).unwrap();
        // positions: (p·l1)·l2 against p·(l1·l2), equal up to one rounding each
        prop_assert!((a.position - b.position).norm() <= 4.0 * f64::EPSILON * b.position.norm());
        prop_assert!((a.mean_curvature - b.mean_curvature).abs() <= 4.0 * f64::EPSILON * b.mean_curvature.abs());
    }

    #[test]
    fn residual_scales_inversely(s in sample(), a in alpha(), l in 0.05..20.0f64) {
        let r0 = stationary_residual(&s, a).unwrap();
        let r1 = stationary_residual(&s.dilate(l).unwrap(), a).unwrap();
        prop_assert!((r1 * l - r0).abs() <= 1e-12 * (1.0 + r0.abs()));
    }

    #[test]
    fn residual_is_rotation_invariant(s in sample(), a in alpha(), axis in direction(), angle in -3.1..3.1f64) {
        let rot = Rotation3::from_axis_angle(&nalgebra::Unit::new_normalize(Vector3::from(axis)), angle);
        let r = rotate_about_origin(&s, rot.matrix()).unwrap();
        let r0 = stationary_residual(&s, a).unwrap();
        let r1 = stationary_residual(&r, a).unwrap();
        prop_assert!((r0 - r1).abs() <= 1e-12 * (1.0 + r0.abs()));
    }
}

#[test]
fn dilation_composition_is_exact_for_powers_of_two() {
    let s = SurfaceSample::new(Point3::new(0.3, -1.7, 2.9), Point3::new(1.0, 2.0, 3.0), 0.7, -0.2).unwrap();
    for (l1, l2) in [(2.0, 0.5), (4.0, 8.0), (0.25, 0.125)] {
        let a = s.dilate(l1).unwrap().dilate(l2).unwrap();
        assert_eq!(a.position, s.dilate(l1 * l2).unwrap().position);
    }
}
