//! Checks planes, spheres and cylinders against the stationary equation.

use stationary::verifiers::{isoparametric_suite, verify_isoparametric, Isoparametric};
use stationary::Alpha;

fn main() -> stationary::Result<()> {
    let cases = [
        (Isoparametric::Sphere { center: [0.0, 0.0, 0.0], radius: 2.0 }, -2.0),
        (Isoparametric::Sphere { center: [0.0, 0.0, 0.5], radius: 0.5 }, -4.0),
        (Isoparametric::Sphere { center: [0.0, 0.0, 0.5], radius: 0.5 }, -2.0),
        (Isoparametric::Plane { point: [0.0, 0.0, 0.0], normal: [1.0, 2.0, 2.0] }, 3.0),
        (Isoparametric::Plane { point: [0.0, 0.0, 1.0], normal: [0.0, 0.0, 1.0] }, 3.0),
        (Isoparametric::Cylinder { axis_point: [0.0, 0.0, 0.0], axis_dir: [0.0, 0.0, 1.0], radius: 1.0 }, -1.0),
    ];
    for (kind, a) in cases {
        let v = verify_isoparametric(&kind, Alpha::new(a)?)?;
        println!("alpha = {a:4}: {:?} -> {:?} (max |residual| {:.2e})", kind, v.verdict, v.max_abs_residual);
    }
    let suite = isoparametric_suite()?;
    println!("default grid: {} cells, {} mismatches", suite.cells.len(), suite.mismatches().count());
    Ok(())
}
