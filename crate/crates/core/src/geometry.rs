//! Basic types and the stationary equation `H = α⟨ν, p⟩ / |p|²`.
//!
//! Orientation convention: the mean curvature is the *sum* of the principal
//! curvatures measured against the stored unit normal. Spheres and cylinders
//! carry the inward normal, so a sphere of radius `r` has `H = 2/r`.

use std::fmt;

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Point3 = Vector3<f64>;

/// Tolerance on `|ν| = 1` and on `RᵀR = I`.
pub const UNIT_TOL: f64 = 1e-12;

/// Exponent of the density `|p|^α`. Zero is rejected.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Alpha(f64);

/// Qualitative regime of `α`. Boundaries at `-2` and `-4` use exact equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    Positive,
    NegTwoToZero,
    ExactNegTwo,
    NegFourToNegTwo,
    ExactNegFour,
    BelowNegFour,
}

impl Alpha {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite("alpha"));
        }
        if value == 0.0 {
            return Err(Error::AlphaZero);
        }
        Ok(Self(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn regime(self) -> Regime {
        let a = self.0;
        if a > 0.0 {
            Regime::Positive
        } else if a > -2.0 {
            Regime::NegTwoToZero
        } else if a == -2.0 {
            Regime::ExactNegTwo
        } else if a > -4.0 {
            Regime::NegFourToNegTwo
        } else if a == -4.0 {
            Regime::ExactNegFour
        } else {
            Regime::BelowNegFour
        }
    }
}

impl TryFrom<f64> for Alpha {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Alpha::new(value)
    }
}

impl From<Alpha> for f64 {
    fn from(a: Alpha) -> f64 {
        a.0
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A point of an oriented surface together with its curvature data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSample {
    pub position: Point3,
    pub normal: Point3,
    pub mean_curvature: f64,
    pub principal_k1: f64,
    pub principal_k2: f64,
}

impl SurfaceSample {
    /// Builds a sample from principal curvatures; the normal is normalized.
    pub fn new(position: Point3, normal: Point3, k1: f64, k2: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Degenerate("zero or non-finite normal".into()));
        }
        Ok(Self { position, normal: normal / n, mean_curvature: k1 + k2, principal_k1: k1, principal_k2: k2 })
    }

    /// Sample for a surface whose principal curvatures are not tracked
    /// individually (only their sum is known).
    pub fn with_mean_curvature(position: Point3, normal: Point3, h: f64) -> Result<Self> {
        Self::new(position, normal, h, 0.0).map(|mut s| {
            s.principal_k1 = f64::NAN;
            s.principal_k2 = f64::NAN;
            s
        })
    }

    /// Point of the sphere `|p - center| = radius` in direction `dir`, inward normal.
    pub fn on_sphere(center: Point3, radius: f64, dir: Point3) -> Result<Self> {
        positive("radius", radius)?;
        let d = dir.try_normalize(0.0).ok_or_else(|| Error::Degenerate("zero direction".into()))?;
        let k = 1.0 / radius;
        Self::new(center + d * radius, -d, k, k)
    }

    /// Point of a plane with the given unit normal.
    pub fn on_plane(point: Point3, normal: Point3) -> Result<Self> {
        Self::new(point, normal, 0.0, 0.0)
    }

    /// Point of the circular cylinder with axis `axis_point + λ·axis_dir`,
    /// at angle `t` and axial coordinate `height`; inward normal.
    pub fn on_cylinder(axis_point: Point3, axis_dir: Point3, radius: f64, t: f64, height: f64) -> Result<Self> {
        positive("radius", radius)?;
        let d = axis_dir.try_normalize(0.0).ok_or_else(|| Error::Degenerate("zero axis direction".into()))?;
        let (e1, e2) = orthonormal_complement(&d);
        let radial = e1 * t.cos() + e2 * t.sin();
        Self::new(axis_point + d * height + radial * radius, -radial, 1.0 / radius, 0.0)
    }

    /// Point `Φ(s, t) = (x cos t, x sin t, z)` of the surface of revolution
    /// generated by an arc-length curve with tangent angle `ψ` and `ψ' = dpsi`.
    /// At `x = 0` the point is umbilic (`κ₂ = κ₁`).
    pub fn on_revolution(x: f64, z: f64, psi: f64, dpsi: f64, t: f64) -> Result<Self> {
        let (st, ct) = t.sin_cos();
        let (sp, cp) = psi.sin_cos();
        let k2 = if x == 0.0 { dpsi } else { sp / x };
        Self::new(Point3::new(x * ct, x * st, z), Point3::new(-sp * ct, -sp * st, cp), dpsi, k2)
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositive { name, value })
    }
}

/// Two unit vectors completing `d` to a right-handed orthonormal frame.
pub fn orthonormal_complement(d: &Point3) -> (Point3, Point3) {
    let helper = if d.x.abs() < 0.9 { Point3::x() } else { Point3::y() };
    let e1 = (helper - d * helper.dot(d)).normalize();
    let e2 = d.cross(&e1);
    (e1, e2)
}

/// `H − α⟨ν, p⟩ / |p|²`; zero exactly on stationary surfaces.
pub fn stationary_residual(sample: &SurfaceSample, alpha: Alpha) -> Result<f64> {
    let p = &sample.position;
    let p2 = p.norm_squared();
    if p2 == 0.0 {
        return Err(Error::OriginPoint);
    }
    Ok(sample.mean_curvature - alpha.value() * sample.normal.dot(p) / p2)
}

/// Weighted mean curvature `(2 + α)/r` of the sphere of radius `r` centered
/// at the origin, inward orientation.
pub fn sphere_weighted_h(radius: f64, alpha: Alpha) -> Result<f64> {
    positive("radius", radius)?;
    Ok((2.0 + alpha.value()) / radius)
}

/// Weighted mean curvature of the vertical cylinder of radius `r` about the
/// z-axis at height `z`, inward orientation.
pub fn cylinder_weighted_h(radius: f64, z: f64, alpha: Alpha) -> Result<f64> {
    positive("radius", radius)?;
    let r2 = radius * radius;
    Ok(((1.0 + alpha.value()) * r2 + z * z) / (radius * (r2 + z * z)))
}

/// Both sides of `Δ|p|² = 4 + 2H⟨ν, p⟩`: the general identity on the left and
/// its stationary form `4 + 2α⟨ν, p⟩²/|p|²` on the right.
pub fn laplacian_norm_identity(sample: &SurfaceSample, alpha: Alpha) -> Result<(f64, f64)> {
    let p = &sample.position;
    let p2 = p.norm_squared();
    if p2 == 0.0 {
        return Err(Error::OriginPoint);
    }
    let np = sample.normal.dot(p);
    let lhs = 4.0 + 2.0 * sample.mean_curvature * np;
    let rhs = 4.0 + 2.0 * alpha.value() * np * np / p2;
    Ok((lhs, rhs))
}

/// Symmetries of the stationary equation: dilations from the origin and
/// linear isometries.
pub trait Similarity: Sized {
    /// Dilation `p ↦ λp` with `λ > 0`.
    fn dilate(&self, lambda: f64) -> Result<Self>;
}

pub(crate) fn check_dilation(lambda: f64) -> Result<()> {
    positive("lambda", lambda)
}

impl Similarity for SurfaceSample {
    fn dilate(&self, lambda: f64) -> Result<Self> {
        check_dilation(lambda)?;
        Ok(Self {
            position: self.position * lambda,
            normal: self.normal,
            mean_curvature: self.mean_curvature / lambda,
            principal_k1: self.principal_k1 / lambda,
            principal_k2: self.principal_k2 / lambda,
        })
    }
}

impl Similarity for Vec<SurfaceSample> {
    fn dilate(&self, lambda: f64) -> Result<Self> {
        self.iter().map(|s| s.dilate(lambda)).collect()
    }
}

/// Maximum entry of `|RᵀR − I|`.
pub fn orthogonality_defect(rotation: &Matrix3<f64>) -> f64 {
    (rotation.transpose() * rotation - Matrix3::identity()).abs().max()
}

/// Applies a linear isometry (rotation or reflection) to a sample.
pub fn rotate_about_origin(sample: &SurfaceSample, rotation: &Matrix3<f64>) -> Result<SurfaceSample> {
    let deviation = orthogonality_defect(rotation);
    if !(deviation <= UNIT_TOL) {
        return Err(Error::NotOrthogonal { deviation });
    }
    Ok(SurfaceSample { position: rotation * sample.position, normal: rotation * sample.normal, ..*sample })
}

/// Rotates every sample; fails before touching any sample if the matrix is
/// not orthogonal.
pub fn rotate_samples(samples: &[SurfaceSample], rotation: &Matrix3<f64>) -> Result<Vec<SurfaceSample>> {
    let deviation = orthogonality_defect(rotation);
    if !(deviation <= UNIT_TOL) {
        return Err(Error::NotOrthogonal { deviation });
    }
    samples.iter().map(|s| rotate_about_origin(s, rotation)).collect()
}
