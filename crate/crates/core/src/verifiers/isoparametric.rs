//! Planes, spheres and circular cylinders.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{CellReport, SuiteReport, Verdict, STATIONARY_TOL};
use crate::geometry::{orthonormal_complement, stationary_residual, Alpha, Point3, SurfaceSample};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Isoparametric {
    Plane { point: [f64; 3], normal: [f64; 3] },
    Sphere { center: [f64; 3], radius: f64 },
    Cylinder { axis_point: [f64; 3], axis_dir: [f64; 3], radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub position: [f64; 3],
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsoVerdict {
    pub verdict: Verdict,
    pub max_abs_residual: f64,
    /// Sample with the largest residual; present when not stationary.
    pub witness: Option<Witness>,
}

impl Isoparametric {
    fn validate(&self) -> Result<()> {
        let finite = |v: &[f64; 3]| v.iter().all(|c| c.is_finite());
        match self {
            Self::Plane { point, normal } => {
                if !finite(point) || !finite(normal) || Point3::from(*normal).norm() == 0.0 {
                    return Err(Error::Degenerate("plane needs a finite point and nonzero normal".into()));
                }
            }
            Self::Sphere { center, radius } => {
                if !finite(center) {
                    return Err(Error::NonFinite("sphere center"));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::NonPositive { name: "radius", value: *radius });
                }
            }
            Self::Cylinder { axis_point, axis_dir, radius } => {
                if !finite(axis_point) || !finite(axis_dir) || Point3::from(*axis_dir).norm() == 0.0 {
                    return Err(Error::Degenerate("cylinder needs a finite point and nonzero axis".into()));
                }
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::NonPositive { name: "radius", value: *radius });
                }
            }
        }
        Ok(())
    }

    /// Samples spread over the surface; points at the origin are skipped.
    pub fn samples(&self) -> Result<Vec<SurfaceSample>> {
        self.validate()?;
        let mut out = Vec::new();
        match *self {
            Self::Plane { point, normal } => {
                let n = Point3::from(normal).normalize();
                let (e1, e2) = orthonormal_complement(&n);
                let scale = Point3::from(point).norm().max(1.0);
                let offsets = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];
                for u in offsets {
                    for v in offsets {
                        let p = Point3::from(point) + (e1 * u + e2 * v) * scale;
                        out.push(SurfaceSample::on_plane(p, n)?);
                    }
                }
            }
            Self::Sphere { center, radius } => {
                for i in 0..9 {
                    let polar = std::f64::consts::PI * (i as f64 + 0.5) / 9.0;
                    for j in 0..16 {
                        let az = std::f64::consts::TAU * (j as f64 + 0.25) / 16.0;
                        let dir = Point3::new(polar.sin() * az.cos(), polar.sin() * az.sin(), polar.cos());
                        out.push(SurfaceSample::on_sphere(Point3::from(center), radius, dir)?);
                    }
                }
            }
            Self::Cylinder { axis_point, axis_dir, radius } => {
                for j in 0..12 {
                    let t = std::f64::consts::TAU * (j as f64 + 0.25) / 12.0;
                    for height in [-2.0, -1.0, -0.3, 0.0, 0.5, 1.5] {
                        out.push(SurfaceSample::on_cylinder(
                            Point3::from(axis_point),
                            Point3::from(axis_dir),
                            radius,
                            t,
                            height * radius.max(1.0),
                        )?);
                    }
                }
            }
        }
        let tiny = 1e-9 * self.length_scale();
        out.retain(|s| s.position.norm() > tiny);
        Ok(out)
    }

    fn length_scale(&self) -> f64 {
        match *self {
            Self::Plane { point, .. } => Point3::from(point).norm().max(1.0),
            Self::Sphere { radius, .. } | Self::Cylinder { radius, .. } => radius,
        }
    }

    /// Closed-form answer: vector planes for every α, spheres centered at
    /// the origin for α = −2, spheres through the origin for α = −4, never
    /// a cylinder.
    pub fn expected(&self, alpha: Alpha) -> Result<Verdict> {
        self.validate()?;
        let tol = 1e-12;
        let yes = match *self {
            Self::Plane { point, normal } => {
                let n = Point3::from(normal).normalize();
                n.dot(&Point3::from(point)).abs() <= tol * Point3::from(point).norm().max(1.0)
            }
            Self::Sphere { center, radius } => {
                let d = Point3::from(center).norm();
                let a = alpha.value();
                (a == -2.0 && d <= tol * radius) || (a == -4.0 && (d - radius).abs() <= tol * radius)
            }
            Self::Cylinder { .. } => false,
        };
        Ok(if yes { Verdict::Stationary } else { Verdict::NotStationary })
    }
}

/// Evaluates the residual over [`Isoparametric::samples`]; stationary when
/// every sample has `|residual| ≤ 1e−9`.
pub fn verify_isoparametric(kind: &Isoparametric, alpha: Alpha) -> Result<IsoVerdict> {
    let mut worst = Witness { position: [0.0; 3], residual: 0.0 };
    for s in kind.samples()? {
        let r = stationary_residual(&s, alpha)?;
        if r.abs() >= worst.residual.abs() {
            worst = Witness { position: s.position.into(), residual: r };
        }
    }
    let max_abs_residual = worst.residual.abs();
    Ok(if max_abs_residual <= STATIONARY_TOL {
        IsoVerdict { verdict: Verdict::Stationary, max_abs_residual, witness: None }
    } else {
        IsoVerdict { verdict: Verdict::NotStationary, max_abs_residual, witness: Some(worst) }
    })
}

pub const DEFAULT_ALPHAS: [f64; 7] = [-5.0, -4.0, -3.0, -2.0, -1.0, 1.0, 2.0];

/// Planes, spheres and cylinders covering every stationary and
/// non-stationary configuration.
pub fn default_surfaces() -> Vec<Isoparametric> {
    let s3 = 1.0 / 3f64.sqrt();
    vec![
        Isoparametric::Plane { point: [0.0, 0.0, 0.0], normal: [0.0, 1.0, 0.0] },
        Isoparametric::Plane { point: [0.0, 0.0, 0.0], normal: [0.0, 0.0, 1.0] },
        Isoparametric::Plane { point: [2.0, -1.0, 0.0], normal: [1.0, 2.0, 3.0] },
        Isoparametric::Plane { point: [0.0, 0.0, 1.0], normal: [0.0, 0.0, 1.0] },
        Isoparametric::Plane { point: [1.0, 1.0, 1.0], normal: [1.0, 0.0, 1.0] },
        Isoparametric::Sphere { center: [0.0, 0.0, 0.0], radius: 1.0 },
        Isoparametric::Sphere { center: [0.0, 0.0, 0.0], radius: 3.0 },
        Isoparametric::Sphere { center: [0.0, 0.0, 0.5], radius: 0.5 },
        Isoparametric::Sphere { center: [s3 * 2.0, s3 * 2.0, s3 * 2.0], radius: 2.0 },
        Isoparametric::Sphere { center: [1.0, 0.0, 0.0], radius: 0.5 },
        Isoparametric::Sphere { center: [0.0, 0.0, 1.0], radius: 2.0 },
        Isoparametric::Cylinder { axis_point: [0.0, 0.0, 0.0], axis_dir: [0.0, 0.0, 1.0], radius: 1.0 },
        Isoparametric::Cylinder { axis_point: [0.0, 0.0, 0.0], axis_dir: [0.0, 0.0, 1.0], radius: 0.5 },
        Isoparametric::Cylinder { axis_point: [0.0, 0.0, 0.0], axis_dir: [1.0, 1.0, 0.0], radius: 2.0 },
        Isoparametric::Cylinder { axis_point: [1.0, 0.0, 0.0], axis_dir: [0.0, 0.0, 1.0], radius: 1.0 },
        Isoparametric::Cylinder { axis_point: [0.0, 2.0, 0.0], axis_dir: [0.0, 1.0, 1.0], radius: 1.0 },
    ]
}

/// Every default surface against every default α.
pub fn isoparametric_suite() -> Result<SuiteReport> {
    let surfaces = default_surfaces();
    let cells: Vec<(Isoparametric, f64)> =
        surfaces.iter().flat_map(|s| DEFAULT_ALPHAS.iter().map(move |&a| (*s, a))).collect();
    let cells = cells
        .par_iter()
        .map(|(surface, a)| {
            let alpha = Alpha::new(*a)?;
            let v = verify_isoparametric(surface, alpha)?;
            Ok(CellReport {
                params: json!({ "surface": surface, "alpha": a }),
                verdict: v.verdict,
                blocking_coefficient: None,
                max_abs_value: v.max_abs_residual,
                expected: Some(surface.expected(alpha)?),
                branches: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("isoparametric", cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn spheres() {
        let centered = Isoparametric::Sphere { center: [0.0; 3], radius: 3.0 };
        assert_eq!(verify_isoparametric(&centered, a(-2.0)).unwrap().verdict, Verdict::Stationary);
        let v = verify_isoparametric(&centered, a(-3.0)).unwrap();
        assert_eq!(v.verdict, Verdict::NotStationary);
        // (2 + α)/r everywhere
        assert!((v.witness.unwrap().residual.abs() - 1.0 / 3.0).abs() < 1e-12);
        let through = Isoparametric::Sphere { center: [0.0, 0.0, 0.5], radius: 0.5 };
        assert_eq!(verify_isoparametric(&through, a(-4.0)).unwrap().verdict, Verdict::Stationary);
        assert_eq!(verify_isoparametric(&through, a(-2.0)).unwrap().verdict, Verdict::NotStationary);
    }

    #[test]
    fn planes() {
        let y0 = Isoparametric::Plane { point: [0.0; 3], normal: [0.0, 1.0, 0.0] };
        let z1 = Isoparametric::Plane { point: [0.0, 0.0, 1.0], normal: [0.0, 0.0, 1.0] };
        assert_eq!(verify_isoparametric(&y0, a(1.0)).unwrap().verdict, Verdict::Stationary);
        let v = verify_isoparametric(&z1, a(1.0)).unwrap();
        assert_eq!(v.verdict, Verdict::NotStationary);
        assert!(v.witness.is_some());
    }

    #[test]
    fn cylinders_never() {
        let c = Isoparametric::Cylinder { axis_point: [0.0; 3], axis_dir: [0.0, 0.0, 1.0], radius: 1.0 };
        for al in DEFAULT_ALPHAS {
            let v = verify_isoparametric(&c, a(al)).unwrap();
            assert_eq!(v.verdict, Verdict::NotStationary, "alpha {al}");
            assert!(v.witness.unwrap().residual.abs() > 1e-9);
        }
    }

    #[test]
    fn degenerate_inputs() {
        let bad = Isoparametric::Sphere { center: [0.0; 3], radius: 0.0 };
        assert!(verify_isoparametric(&bad, a(1.0)).is_err());
        let bad = Isoparametric::Plane { point: [0.0; 3], normal: [0.0; 3] };
        assert!(verify_isoparametric(&bad, a(1.0)).is_err());
    }

    #[test]
    fn suite_matches_closed_forms() {
        let r = isoparametric_suite().unwrap();
        assert_eq!(r.mismatches().count(), 0);
        assert!(r.count(Verdict::Stationary) > 0);
    }
}
