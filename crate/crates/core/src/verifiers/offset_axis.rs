//! Surfaces of revolution about the axis `{x = q1, y = 0}`:
//! `Φ(s, t) = (q1 + x(s) cos t, x(s) sin t, z(s))`.
//!
//! Clearing denominators, `x|p|²·(H − α⟨ν,p⟩/|p|²) = A0(s) + A1(s) cos t`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{max_abs, CellReport, SuiteReport, Verdict, STATIONARY_TOL};
use crate::arclength::CurveState;
use crate::geometry::{Alpha, Point3, SurfaceSample};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OffsetAxisCoefficients {
    pub s: Vec<f64>,
    /// Extracted from the residual.
    pub a0: Vec<f64>,
    pub a1: Vec<f64>,
    /// `sin ψ (q1² + (α+1)x² + z²) + xψ'(q1² + x² + z²) − αxz cos ψ`.
    pub a0_closed: Vec<f64>,
    /// `x q1 (2xψ' + (2+α) sin ψ)`.
    pub a1_closed: Vec<f64>,
}

impl OffsetAxisCoefficients {
    /// Largest gap between the extracted and closed-form coefficients.
    pub fn closed_form_gap(&self) -> f64 {
        let gap = |a: &[f64], b: &[f64]| a.iter().zip(b).fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        gap(&self.a0, &self.a0_closed).max(gap(&self.a1, &self.a1_closed))
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.a0).max(max_abs(&self.a1))
    }
}

fn offset_sample(q1: f64, c: &CurveState, t: f64) -> Result<SurfaceSample> {
    let (st, ct) = t.sin_cos();
    let (sp, cp) = c.psi.sin_cos();
    SurfaceSample::new(Point3::new(q1 + c.x * ct, c.x * st, c.z), Point3::new(-sp * ct, -sp * st, cp), c.dpsi, sp / c.x)
}

/// `x(H|p|² − α⟨ν,p⟩)`, the residual with denominators cleared.
fn cleared(q1: f64, c: &CurveState, t: f64, alpha: Alpha) -> Result<f64> {
    let s = offset_sample(q1, c, t)?;
    let p = s.position;
    Ok(c.x * (s.mean_curvature * p.norm_squared() - alpha.value() * s.normal.dot(&p)))
}

/// Coefficients `A0, A1` along the profile, extracted from the residual at
/// `t = π/2` and `t = 0` and also evaluated in closed form.
pub fn offset_axis_coefficients(q1: f64, profile: &[CurveState], alpha: Alpha) -> Result<OffsetAxisCoefficients> {
    if !q1.is_finite() {
        return Err(Error::NonFinite("q1"));
    }
    let a = alpha.value();
    let mut out = OffsetAxisCoefficients {
        s: Vec::with_capacity(profile.len()),
        a0: Vec::with_capacity(profile.len()),
        a1: Vec::with_capacity(profile.len()),
        a0_closed: Vec::with_capacity(profile.len()),
        a1_closed: Vec::with_capacity(profile.len()),
    };
    for c in profile {
        if !(c.x > 0.0) {
            return Err(Error::NonPositiveRadius { s: c.s, x: c.x });
        }
        let n_half = cleared(q1, c, FRAC_PI_2, alpha)?;
        let n_zero = cleared(q1, c, 0.0, alpha)?;
        let (sp, cp) = c.psi.sin_cos();
        let (x, z) = (c.x, c.z);
        out.s.push(c.s);
        out.a0.push(n_half);
        out.a1.push(n_zero - n_half);
        out.a0_closed
            .push(sp * (q1 * q1 + (a + 1.0) * x * x + z * z) + x * c.dpsi * (q1 * q1 + x * x + z * z) - a * x * z * cp);
        out.a1_closed.push(x * q1 * (2.0 * x * c.dpsi + (2.0 + a) * sp));
    }
    Ok(out)
}

/// The circle of center `(q1, c/2)` through the origin, as a profile about
/// the axis `x = q1`: `x = ρ cos σ`, `z = c/2 + ρ sin σ` with
/// `ρ = √(c² + 4q1²)/2`, sampled at `n` points of `σ ∈ (−π/2, π/2)`.
pub fn offset_axis_sphere_profile(q1: f64, c: f64, n: usize) -> Result<Vec<CurveState>> {
    if q1 == 0.0 || !q1.is_finite() {
        return Err(Error::Invalid("offset axis needs q1 != 0".into()));
    }
    if !c.is_finite() {
        return Err(Error::NonFinite("c"));
    }
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let rho = (c * c + 4.0 * q1 * q1).sqrt() / 2.0;
    let margin = 0.05;
    Ok((0..n)
        .map(|i| {
            let sigma = -FRAC_PI_2 + margin + (PI - 2.0 * margin) * i as f64 / (n - 1) as f64;
            CurveState {
                s: rho * sigma,
                x: rho * sigma.cos(),
                z: c / 2.0 + rho * sigma.sin(),
                psi: sigma + FRAC_PI_2,
                dpsi: 1.0 / rho,
            }
        })
        .collect())
}

/// Center (absolute coordinates, in the `y = 0` plane) and radius of the
/// circle produced by [`offset_axis_sphere_profile`].
pub fn offset_axis_circle(q1: f64, c: f64) -> ([f64; 2], f64) {
    ([q1, c / 2.0], (c * c + 4.0 * q1 * q1).sqrt() / 2.0)
}

/// Circle profiles for several `(q1, c)` against the default α values;
/// stationary exactly when α = −4.
pub fn offset_axis_suite() -> Result<SuiteReport> {
    let mut cells = Vec::new();
    for a in super::isoparametric::DEFAULT_ALPHAS {
        for q1 in [0.5, 1.0, 2.0] {
            for c in [0.0, 1.0, 2.0] {
                cells.push((a, q1, c));
            }
        }
    }
    let cells = cells
        .par_iter()
        .map(|&(a, q1, c)| {
            let alpha = Alpha::new(a)?;
            let profile = offset_axis_sphere_profile(q1, c, 101)?;
            let co = offset_axis_coefficients(q1, &profile, alpha)?;
            let (m0, m1) = (max_abs(&co.a0), max_abs(&co.a1));
            let (verdict, blocking) = if m1 > STATIONARY_TOL {
                (Verdict::NotStationary, Some("A1".to_string()))
            } else if m0 > STATIONARY_TOL {
                (Verdict::NotStationary, Some("A0".to_string()))
            } else {
                (Verdict::Stationary, None)
            };
            let expected = if a == -4.0 { Verdict::Stationary } else { Verdict::NotStationary };
            Ok(CellReport {
                params: json!({ "alpha": a, "q1": q1, "c": c, "closed_form_gap": co.closed_form_gap() }),
                verdict,
                blocking_coefficient: blocking,
                max_abs_value: m0.max(m1),
                expected: Some(expected),
                branches: Vec::new(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("offset-axis", cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn circle_is_stationary_only_for_minus_four() {
        let p = offset_axis_sphere_profile(1.0, 0.0, 41).unwrap();
        let co = offset_axis_coefficients(1.0, &p, a(-4.0)).unwrap();
        assert!(co.max_abs() < 1e-9, "{}", co.max_abs());
        let co = offset_axis_coefficients(1.0, &p, a(-2.0)).unwrap();
        assert!(max_abs(&co.a0) > 0.1);
    }

    #[test]
    fn extracted_matches_closed_form() {
        let p = offset_axis_sphere_profile(0.7, 1.3, 31).unwrap();
        for al in [-5.0, -1.0, 2.0] {
            let co = offset_axis_coefficients(0.7, &p, a(al)).unwrap();
            assert!(co.closed_form_gap() < 1e-12, "{}", co.closed_form_gap());
        }
    }

    #[test]
    fn zero_offset_kills_a1() {
        let p = offset_axis_sphere_profile(1.0, 2.0, 21).unwrap();
        let co = offset_axis_coefficients(0.0, &p, a(1.5)).unwrap();
        assert!(max_abs(&co.a1) < 1e-13);
    }

    #[test]
    fn circles_pass_through_origin() {
        for (q1, c) in [(1.0, 0.0), (1.0, 2.0), (-0.3, 5.0)] {
            let ([cx, cz], r) = offset_axis_circle(q1, c);
            assert!((cx.hypot(cz) - r).abs() < 1e-12);
        }
        let ([cx, cz], r) = offset_axis_circle(1.0, 2.0);
        assert_eq!((cx, cz), (1.0, 1.0));
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(offset_axis_sphere_profile(0.0, 1.0, 10).is_err());
    }

    #[test]
    fn rejects_nonpositive_x() {
        let mut p = offset_axis_sphere_profile(1.0, 0.0, 5).unwrap();
        p[2].x = 0.0;
        assert!(offset_axis_coefficients(1.0, &p, a(1.0)).is_err());
    }

    #[test]
    fn suite() {
        let r = offset_axis_suite().unwrap();
        assert_eq!(r.mismatches().count(), 0);
    }
}
