//! Helicoidal surfaces `Φ(s, t) = (q1 + x cos t, x sin t, z + h t)` generated
//! by an arc-length profile `(x, z, ψ)` under screw motions of pitch `h`
//! about the axis `{x = q1, y = 0}`.
//!
//! With `W = x² + h² cos²ψ` the unit normal is
//! `(h cosψ sin t − x sinψ cos t, −x sinψ sin t − h cosψ cos t, x cosψ)/√W`
//! and `H W^{3/2} = K := x(x² + h²)ψ' + sinψ (x² + 2h² cos²ψ)`.
//!
//! Two equations are checked, each with denominators cleared:
//! - weighted area: `(H|p|² − α⟨ν,p⟩) W^{3/2}`,
//! - shrinker: `(H − α⟨ν,p⟩) W^{3/2}`.
//!
//! Both are exact combinations of `{1, t, t², sin t, cos t}` with
//! coefficients depending on `s` only.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::{Matrix5, Vector5};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{max_abs, BranchReport, CellReport, SuiteReport, Verdict, NONZERO_THRESHOLD};
use crate::arclength::CurveState;
use crate::geometry::{Alpha, Point3, SurfaceSample};
use crate::ode::{self, Control};
use crate::{Error, Result};

pub const COEFFICIENT_NAMES: [&str; 5] = ["A0", "A1", "A2", "A3", "A4"];

/// Values of `t` used to separate the five coefficients.
pub const EXTRACTION_ANGLES: [f64; 5] = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Equation {
    /// `H = α⟨ν,p⟩/|p|²`.
    WeightedArea,
    /// `H = α⟨ν,p⟩`.
    Shrinker,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HelicoidalParams {
    pub q1: f64,
    pub h: f64,
    pub profile: Vec<CurveState>,
}

impl HelicoidalParams {
    pub fn new(q1: f64, h: f64, profile: Vec<CurveState>) -> Result<Self> {
        if !q1.is_finite() || !h.is_finite() {
            return Err(Error::NonFinite("helicoidal parameters"));
        }
        if profile.is_empty() {
            return Err(Error::TooFewSamples { needed: 1, got: 0 });
        }
        for c in &profile {
            if !(c.x > 0.0) {
                return Err(Error::NonPositiveRadius { s: c.s, x: c.x });
            }
            let w = regularity(h, c);
            if !(w > 0.0) {
                return Err(Error::Regularity { s: c.s, w });
            }
        }
        Ok(Self { q1, h, profile })
    }

    /// Point of the surface with the closed-form normal and mean curvature.
    pub fn sample(&self, i: usize, t: f64) -> Result<SurfaceSample> {
        helicoidal_sample(self.q1, self.h, &self.profile[i], t)
    }
}

/// `W = x² + h² cos²ψ`.
pub fn regularity(h: f64, c: &CurveState) -> f64 {
    c.x * c.x + (h * c.psi.cos()).powi(2)
}

/// `K = H W^{3/2}`.
fn k_term(h: f64, c: &CurveState) -> f64 {
    let (sp, cp) = c.psi.sin_cos();
    c.x * (c.x * c.x + h * h) * c.dpsi + sp * (c.x * c.x + 2.0 * h * h * cp * cp)
}

pub fn helicoidal_sample(q1: f64, h: f64, c: &CurveState, t: f64) -> Result<SurfaceSample> {
    let w = regularity(h, c);
    if !(w > 0.0) {
        return Err(Error::Regularity { s: c.s, w });
    }
    let (st, ct) = t.sin_cos();
    let (sp, cp) = c.psi.sin_cos();
    let x = c.x;
    let position = Point3::new(q1 + x * ct, x * st, c.z + h * t);
    let normal = Point3::new(h * cp * st - x * sp * ct, -x * sp * st - h * cp * ct, x * cp);
    SurfaceSample::with_mean_curvature(position, normal, k_term(h, c) / w.powf(1.5))
}

/// Residual with denominators cleared, evaluated from the surface sample.
pub fn cleared_residual(params: &HelicoidalParams, i: usize, t: f64, alpha: Alpha, eq: Equation) -> Result<f64> {
    let s = params.sample(i, t)?;
    let w = regularity(params.h, &params.profile[i]);
    let p = s.position;
    let np = s.normal.dot(&p);
    let h = s.mean_curvature;
    let a = alpha.value();
    let core = match eq {
        Equation::WeightedArea => h * p.norm_squared() - a * np,
        Equation::Shrinker => h - a * np,
    };
    Ok(core * w.powf(1.5))
}

/// Coefficients `A0..A4` of `{1, t, t², sin t, cos t}` at every profile sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualCoefficients {
    pub s: Vec<f64>,
    pub a0: Vec<f64>,
    pub a1: Vec<f64>,
    pub a2: Vec<f64>,
    pub a3: Vec<f64>,
    pub a4: Vec<f64>,
}

impl ResidualCoefficients {
    fn with_capacity(n: usize) -> Self {
        let v = || Vec::with_capacity(n);
        Self { s: v(), a0: v(), a1: v(), a2: v(), a3: v(), a4: v() }
    }

    fn push(&mut self, s: f64, a: [f64; 5]) {
        self.s.push(s);
        self.a0.push(a[0]);
        self.a1.push(a[1]);
        self.a2.push(a[2]);
        self.a3.push(a[3]);
        self.a4.push(a[4]);
    }

    pub fn get(&self, k: usize) -> &[f64] {
        match k {
            0 => &self.a0,
            1 => &self.a1,
            2 => &self.a2,
            3 => &self.a3,
            4 => &self.a4,
            _ => panic!("coefficient index {k} out of range"),
        }
    }

    /// `max_s |A_k(s)|` for each k.
    pub fn max_abs(&self) -> [f64; 5] {
        std::array::from_fn(|k| max_abs(self.get(k)))
    }

    /// `A0 + A1 t + A2 t² + A3 sin t + A4 cos t` at sample `i`.
    pub fn reconstruct(&self, i: usize, t: f64) -> f64 {
        self.a0[i] + self.a1[i] * t + self.a2[i] * t * t + self.a3[i] * t.sin() + self.a4[i] * t.cos()
    }

    pub fn max_gap(&self, other: &Self) -> f64 {
        (0..5).flat_map(|k| self.get(k).iter().zip(other.get(k)).map(|(a, b)| (a - b).abs())).fold(0.0, f64::max)
    }
}

fn basis(t: f64) -> [f64; 5] {
    [1.0, t, t * t, t.sin(), t.cos()]
}

/// Extracts the coefficients by solving the 5×5 system at
/// [`EXTRACTION_ANGLES`] for every sample.
pub fn extract_coefficients(params: &HelicoidalParams, alpha: Alpha, eq: Equation) -> Result<ResidualCoefficients> {
    let m = Matrix5::from_fn(|i, j| basis(EXTRACTION_ANGLES[i])[j]);
    let lu = m.lu();
    let mut out = ResidualCoefficients::with_capacity(params.profile.len());
    for (i, c) in params.profile.iter().enumerate() {
        let mut rhs = Vector5::zeros();
        for (k, &t) in EXTRACTION_ANGLES.iter().enumerate() {
            rhs[k] = cleared_residual(params, i, t, alpha, eq)?;
        }
        let sol = lu.solve(&rhs).ok_or_else(|| Error::Degenerate("singular extraction matrix".into()))?;
        out.push(c.s, [sol[0], sol[1], sol[2], sol[3], sol[4]]);
    }
    Ok(out)
}

pub fn helicoidal_coefficients(params: &HelicoidalParams, alpha: Alpha) -> Result<ResidualCoefficients> {
    extract_coefficients(params, alpha, Equation::WeightedArea)
}

pub fn shrinker_coefficients(params: &HelicoidalParams, alpha: Alpha) -> Result<ResidualCoefficients> {
    extract_coefficients(params, alpha, Equation::Shrinker)
}

/// The coefficients in closed form, for cross-checking the extraction.
pub fn closed_form_coefficients(params: &HelicoidalParams, alpha: Alpha, eq: Equation) -> ResidualCoefficients {
    let (q1, h, a) = (params.q1, params.h, alpha.value());
    let mut out = ResidualCoefficients::with_capacity(params.profile.len());
    for c in &params.profile {
        let (x, z) = (c.x, c.z);
        let (sp, cp) = c.psi.sin_cos();
        let w = regularity(h, c);
        let k = k_term(h, c);
        let support = x * z * cp - x * x * sp;
        let coeffs = match eq {
            Equation::WeightedArea => [
                k * (q1 * q1 + x * x + z * z) - a * w * support,
                2.0 * z * h * k - a * w * x * h * cp,
                h * h * k,
                -a * w * h * q1 * cp,
                2.0 * q1 * x * k + a * w * q1 * x * sp,
            ],
            Equation::Shrinker => {
                [k - a * w * support, -a * w * x * h * cp, 0.0, -a * w * h * q1 * cp, a * w * q1 * x * sp]
            }
        };
        out.push(c.s, coeffs);
    }
    out
}

/// Circular arc of curvature `kappa` starting at `(x0, 0)` with angle `psi0`.
pub fn circle_arc_profile(x0: f64, psi0: f64, kappa: f64, length: f64, n: usize) -> Vec<CurveState> {
    (0..n)
        .map(|i| {
            let s = length * i as f64 / (n - 1).max(1) as f64;
            let psi = psi0 + kappa * s;
            let (x, z) = if kappa == 0.0 {
                (x0 + s * psi0.cos(), s * psi0.sin())
            } else {
                (x0 + (psi.sin() - psi0.sin()) / kappa, (psi0.cos() - psi.cos()) / kappa)
            };
            CurveState { s, x, z, psi, dpsi: kappa }
        })
        .collect()
}

/// `x ≡ x0`, `z = s`, `ψ ≡ π/2` (the case `cos ψ ≡ 0`).
pub fn vertical_line_profile(x0: f64, length: f64, n: usize) -> Vec<CurveState> {
    (0..n)
        .map(|i| {
            let s = length * i as f64 / (n - 1).max(1) as f64;
            CurveState { s, x: x0, z: s, psi: FRAC_PI_2, dpsi: 0.0 }
        })
        .collect()
}

/// `z ≡ z0`, `x = x0 + s`, `ψ ≡ 0` (the case `sin ψ ≡ 0`).
pub fn horizontal_line_profile(x0: f64, z0: f64, length: f64, n: usize) -> Vec<CurveState> {
    (0..n)
        .map(|i| {
            let s = length * i as f64 / (n - 1).max(1) as f64;
            CurveState { s, x: x0 + s, z: z0, psi: 0.0, dpsi: 0.0 }
        })
        .collect()
}

/// Profile on which `K ≡ 0` (so `A2 ≡ 0`): integrates
/// `ψ' = −sinψ (x² + 2h²cos²ψ) / (x(x² + h²))` from `(x0, 0, psi0)`.
pub fn k_zero_profile(x0: f64, h: f64, psi0: f64, length: f64, n: usize) -> Result<Vec<CurveState>> {
    let rhs = move |_s: f64, y: &[f64; 3]| {
        let (x, psi) = (y[0], y[2]);
        let (sp, cp) = psi.sin_cos();
        [cp, sp, -sp * (x * x + 2.0 * h * h * cp * cp) / (x * (x * x + h * h))]
    };
    let opts = ode::Options::default();
    let mut out = Vec::with_capacity(n);
    let mut y = [x0, 0.0, psi0];
    let mut s = 0.0;
    for i in 0..n {
        let target = length * i as f64 / (n - 1).max(1) as f64;
        if target > s {
            let o = ode::integrate(rhs, s, y, target, &opts, |_| Control::Continue)?;
            y = o.y;
            s = target;
        }
        out.push(CurveState { s, x: y[0], z: y[1], psi: y[2], dpsi: rhs(s, &y)[2] });
    }
    Ok(out)
}

/// Coefficients, the ones that vanish and the first of `blockers` that
/// does not.
fn branch(name: &str, coeffs: &ResidualCoefficients, blockers: &[usize]) -> BranchReport {
    let m = coeffs.max_abs();
    let vanishing = (0..5).filter(|&k| m[k] <= NONZERO_THRESHOLD).map(|k| COEFFICIENT_NAMES[k].to_string()).collect();
    let blocking = blockers.iter().copied().find(|&k| m[k] > NONZERO_THRESHOLD);
    BranchReport {
        name: name.to_string(),
        vanishing,
        blocking_coefficient: blocking.map(|k| COEFFICIENT_NAMES[k].to_string()),
        max_abs_value: blocking.map_or(0.0, |k| m[k]),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub alphas: Vec<f64>,
    pub hs: Vec<f64>,
    pub q1s: Vec<f64>,
    pub x0s: Vec<f64>,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            alphas: vec![-6.0, -5.0, -4.0, -3.0, -2.5, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0],
            hs: vec![0.5, 1.0, 2.0],
            q1s: vec![0.0, 0.5, 1.0],
            x0s: vec![0.5, 1.0, 2.0],
        }
    }
}

impl ScanGrid {
    fn cells(&self, include_h_zero: bool) -> Vec<(f64, f64, f64, f64)> {
        let mut hs: Vec<f64> = self.hs.iter().copied().filter(|&h| h != 0.0).collect();
        if include_h_zero {
            hs.insert(0, 0.0);
        }
        let mut out = Vec::new();
        for &a in &self.alphas {
            if a == 0.0 {
                continue;
            }
            for &h in &hs {
                for &q1 in &self.q1s {
                    for &x0 in &self.x0s {
                        out.push((a, h, q1, x0));
                    }
                }
            }
        }
        out
    }
}

const PROFILE_SAMPLES: usize = 21;
const GENERIC_PSI0: f64 = 0.3;
const GENERIC_KAPPA: f64 = 0.5;

fn generic_profile(x0: f64) -> Vec<CurveState> {
    circle_arc_profile(x0, GENERIC_PSI0, GENERIC_KAPPA, 1.0, PROFILE_SAMPLES)
}

/// One cell of the helicoidal case split (`h ≠ 0`).
///
/// - `q1 ≠ 0`: `A3 = 0` forces `cos ψ ≡ 0`; on a generic profile `A3`
///   blocks, on the vertical line `x ≡ x0` the coefficient `A2 = h²x0²` does.
/// - `q1 = 0`: `A2 = 0` pins `ψ'`; on that profile `A1` still forces
///   `cos ψ ≡ 0`, and on the vertical line `A2 = h²x0²` blocks.
pub fn helicoidal_cell(alpha: Alpha, h: f64, q1: f64, x0: f64) -> Result<CellReport> {
    if h == 0.0 {
        return Err(Error::Invalid("pitch 0 is a surface of revolution".into()));
    }
    let line = HelicoidalParams::new(q1, h, vertical_line_profile(x0, 1.0, PROFILE_SAMPLES))?;
    let line_branch = branch("cos_psi_zero", &helicoidal_coefficients(&line, alpha)?, &[2]);
    let first = if q1 != 0.0 {
        let p = HelicoidalParams::new(q1, h, generic_profile(x0))?;
        branch("generic", &helicoidal_coefficients(&p, alpha)?, &[3])
    } else {
        let p = HelicoidalParams::new(q1, h, k_zero_profile(x0, h, GENERIC_PSI0, 1.0, PROFILE_SAMPLES)?)?;
        branch("a2_zero", &helicoidal_coefficients(&p, alpha)?, &[1])
    };
    let branches = vec![first, line_branch];
    let blocked = branches.iter().all(|b| b.blocking_coefficient.is_some());
    // the coefficient named in the argument's conclusion for this case
    let decisive = if q1 != 0.0 { &branches[0] } else { &branches[1] };
    Ok(CellReport {
        params: json!({ "alpha": alpha.value(), "h": h, "q1": q1, "x0": x0 }),
        verdict: if blocked { Verdict::Blocked } else { Verdict::Consistent },
        blocking_coefficient: decisive.blocking_coefficient.clone(),
        max_abs_value: decisive.max_abs_value,
        expected: Some(Verdict::Blocked),
        branches,
    })
}

/// Every `h ≠ 0` cell of the grid; pitch 0 is skipped.
pub fn helicoidal_nonexistence_scan(grid: &ScanGrid) -> Result<SuiteReport> {
    let cells = grid
        .cells(false)
        .par_iter()
        .map(|&(a, h, q1, x0)| helicoidal_cell(Alpha::new(a)?, h, q1, x0))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("helicoidal", cells))
}

/// Shrinker verdict for one profile.
///
/// `h ≠ 0`: a nonzero `A1` rules the profile out; otherwise a nonzero `A4`
/// (proportional to `q1`) forces `q1 = 0`.
/// `h = 0`: a nonzero `A4` forces `q1 = 0`; otherwise a nonzero `A0` rules
/// the profile out.
pub fn shrinker_axis_check(params: &HelicoidalParams, alpha: Alpha) -> Result<BranchReport> {
    let co = shrinker_coefficients(params, alpha)?;
    let order: &[usize] = if params.h != 0.0 { &[1, 4] } else { &[4, 0] };
    Ok(branch("profile", &co, order))
}

/// `Q1ForcedZero` when the blocking coefficient carries the factor `q1`.
pub fn shrinker_verdict(report: &BranchReport) -> Verdict {
    match report.blocking_coefficient.as_deref() {
        Some("A4") => Verdict::Q1ForcedZero,
        Some(_) => Verdict::NotStationary,
        None => Verdict::Consistent,
    }
}

/// One cell of the shrinker case split.
pub fn shrinker_cell(alpha: Alpha, h: f64, q1: f64, x0: f64) -> Result<CellReport> {
    let mut branches = Vec::new();
    let mut run = |name: &str, profile: Vec<CurveState>| -> Result<()> {
        let mut b = shrinker_axis_check(&HelicoidalParams::new(q1, h, profile)?, alpha)?;
        b.name = name.to_string();
        branches.push(b);
        Ok(())
    };
    run("generic", generic_profile(x0))?;
    if h != 0.0 {
        run("cos_psi_zero", vertical_line_profile(x0, 1.0, PROFILE_SAMPLES))?;
    } else {
        run("sin_psi_zero", horizontal_line_profile(x0, 0.5 * x0, 1.0, PROFILE_SAMPLES))?;
        run("plane_z0", horizontal_line_profile(x0, 0.0, 1.0, PROFILE_SAMPLES))?;
    }
    let forced = branches.iter().any(|b| shrinker_verdict(b) == Verdict::Q1ForcedZero);
    let decisive = branches.iter().find(|b| b.blocking_coefficient.as_deref() == Some("A4"));
    Ok(CellReport {
        params: json!({ "alpha": alpha.value(), "h": h, "q1": q1, "x0": x0 }),
        verdict: if forced { Verdict::Q1ForcedZero } else { Verdict::Consistent },
        blocking_coefficient: decisive.and_then(|b| b.blocking_coefficient.clone()),
        max_abs_value: decisive.map_or(0.0, |b| b.max_abs_value),
        expected: Some(if q1 != 0.0 { Verdict::Q1ForcedZero } else { Verdict::Consistent }),
        branches,
    })
}

/// The grid including the pitch-0 column.
pub fn shrinker_scan(grid: &ScanGrid) -> Result<SuiteReport> {
    let cells = grid
        .cells(true)
        .par_iter()
        .map(|&(a, h, q1, x0)| shrinker_cell(Alpha::new(a)?, h, q1, x0))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::new("shrinker", cells))
}
