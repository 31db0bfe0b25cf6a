//! The autonomous system in the tangent angle `ψ` and the polar angle
//! `θ = atan2(z, x)`:
//!
//! ```text
//! dψ/dt = −sin ψ − α cos θ sin(ψ − θ),
//! dθ/dt = cos θ sin(ψ − θ),
//! ```
//!
//! obtained from the arc-length system with `dt = ds / x`. Equilibria are
//! `P1 = (2nπ, kπ)`, `P2 = ((2n−1)π, kπ)` and `P3 = (nπ, π/2 + kπ)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::arclength::Trajectory;
use crate::geometry::Alpha;
use crate::ode::{self, Control};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub psi: f64,
    pub theta: f64,
}

impl PhaseState {
    pub const fn new(psi: f64, theta: f64) -> Self {
        Self { psi, theta }
    }

    pub fn distance(&self, other: &PhaseState) -> f64 {
        (self.psi - other.psi).hypot(self.theta - other.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    P1,
    P2,
    P3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StabilityClass {
    StableNode,
    UnstableNode,
    StableSpiral,
    UnstableSpiral,
    Center,
    Saddle,
    /// A zero eigenvalue; linearization does not decide.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumPoint {
    pub location: PhaseState,
    pub family: Family,
    pub klass: StabilityClass,
    pub eigenvalues: [Eigenvalue; 2],
    /// Unit eigenvector of the positive eigenvalue, for saddles.
    pub unstable_direction: Option<[f64; 2]>,
}

/// `|Re λ|` at or below which a complex pair counts as a center.
pub const TOL_CENTER: f64 = 1e-9;

/// Offset of manifold seeds from the saddle.
pub const MANIFOLD_DELTA: f64 = 1e-6;

/// `‖rhs‖` below which a trace counts as having reached an equilibrium.
pub const REST_TOL: f64 = 1e-10;

const EQUILIBRIUM_TOL: f64 = 1e-9;

pub fn rhs_phase(state: &PhaseState, alpha: Alpha) -> [f64; 2] {
    let (ps, th) = (state.psi, state.theta);
    let d = (ps - th).sin();
    let ct = th.cos();
    [-ps.sin() - alpha.value() * ct * d, ct * d]
}

/// Analytic Jacobian of [`rhs_phase`] at any point.
pub fn jacobian_at(state: &PhaseState, alpha: Alpha) -> Matrix2<f64> {
    let a = alpha.value();
    let (ps, th) = (state.psi, state.theta);
    let (st, ct) = th.sin_cos();
    let (sd, cd) = (ps - th).sin_cos();
    Matrix2::new(-ps.cos() - a * ct * cd, a * st * sd + a * ct * cd, ct * cd, -st * sd - ct * cd)
}

fn near_multiple(v: f64, step: f64) -> Option<i64> {
    let k = (v / step).round();
    ((v - k * step).abs() <= EQUILIBRIUM_TOL).then_some(k as i64)
}

/// Family of an equilibrium, or `NotEquilibrium`.
pub fn identify(state: &PhaseState) -> Result<Family> {
    let err = || Error::NotEquilibrium { psi: state.psi, theta: state.theta };
    let n = near_multiple(state.psi, PI).ok_or_else(err)?;
    if near_multiple(state.theta, PI).is_some() {
        return Ok(if n.rem_euclid(2) == 0 { Family::P1 } else { Family::P2 });
    }
    if near_multiple(state.theta - FRAC_PI_2, PI).is_some() {
        return Ok(Family::P3);
    }
    Err(err())
}

/// Jacobian at an equilibrium, rejecting other points.
pub fn jacobian(state: &PhaseState, alpha: Alpha) -> Result<Matrix2<f64>> {
    identify(state)?;
    Ok(jacobian_at(state, alpha))
}

/// Jacobian at the family representatives `(0,0)`, `(−π,0)`, `(0,π/2)`:
/// `[[−1−α, α],[1, −1]]`, `[[1+α, −α],[−1, 1]]`, `[[−1, −α],[0, 1]]`.
pub fn family_jacobian(family: Family, alpha: Alpha) -> Matrix2<f64> {
    let a = alpha.value();
    match family {
        Family::P1 => Matrix2::new(-1.0 - a, a, 1.0, -1.0),
        Family::P2 => Matrix2::new(1.0 + a, -a, -1.0, 1.0),
        Family::P3 => Matrix2::new(-1.0, -a, 0.0, 1.0),
    }
}

pub fn representative(family: Family) -> PhaseState {
    match family {
        Family::P1 => PhaseState::new(0.0, 0.0),
        Family::P2 => PhaseState::new(-PI, 0.0),
        Family::P3 => PhaseState::new(0.0, FRAC_PI_2),
    }
}

/// Eigenvalues from the characteristic polynomial and the resulting class.
pub fn classify_equilibrium(m: &Matrix2<f64>) -> (StabilityClass, [Eigenvalue; 2]) {
    let tr = m.trace();
    let det = m.determinant();
    let disc = tr * tr - 4.0 * det;
    let ev = if disc < 0.0 {
        let im = (-disc).sqrt() / 2.0;
        [Eigenvalue { re: tr / 2.0, im }, Eigenvalue { re: tr / 2.0, im: -im }]
    } else {
        let r = disc.sqrt();
        // avoid cancellation in the smaller root
        let big = if tr >= 0.0 { (tr + r) / 2.0 } else { (tr - r) / 2.0 };
        let small = if big != 0.0 { det / big } else { 0.0 };
        let (lo, hi) = if big < small { (big, small) } else { (small, big) };
        [Eigenvalue { re: lo, im: 0.0 }, Eigenvalue { re: hi, im: 0.0 }]
    };
    let klass = if det < 0.0 {
        StabilityClass::Saddle
    } else if det == 0.0 {
        StabilityClass::Degenerate
    } else if disc < 0.0 {
        let re = tr / 2.0;
        if re.abs() <= TOL_CENTER {
            StabilityClass::Center
        } else if re < 0.0 {
            StabilityClass::StableSpiral
        } else {
            StabilityClass::UnstableSpiral
        }
    } else if tr < 0.0 {
        StabilityClass::StableNode
    } else {
        StabilityClass::UnstableNode
    };
    (klass, ev)
}

/// Full description of the equilibrium at `state`.
pub fn equilibrium(state: &PhaseState, alpha: Alpha) -> Result<EquilibriumPoint> {
    let family = identify(state)?;
    let m = jacobian_at(state, alpha);
    let (klass, eigenvalues) = classify_equilibrium(&m);
    let unstable_direction = (klass == StabilityClass::Saddle).then(|| {
        // (J − λI)v = 0 for the positive eigenvalue
        let lam = eigenvalues[1].re;
        let (a, b, c, d) = (m[(0, 0)] - lam, m[(0, 1)], m[(1, 0)], m[(1, 1)] - lam);
        let v = if a.abs() + b.abs() >= c.abs() + d.abs() { [-b, a] } else { [-d, c] };
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    });
    Ok(EquilibriumPoint { location: *state, family, klass, eigenvalues, unstable_direction })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegimeTable {
    pub p1: StabilityClass,
    pub p2: StabilityClass,
    pub p3: StabilityClass,
}

pub fn regime_table(alpha: Alpha) -> RegimeTable {
    let k = |f| classify_equilibrium(&family_jacobian(f, alpha)).0;
    RegimeTable { p1: k(Family::P1), p2: k(Family::P2), p3: k(Family::P3) }
}

/// `(−α, 2)/|(−α, 2)|`, the unstable eigenvector at `(0, π/2)`.
pub fn unstable_direction_p3(alpha: Alpha) -> [f64; 2] {
    let a = alpha.value();
    let n = a.hypot(2.0);
    [-a / n, 2.0 / n]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TraceEnd {
    /// `‖rhs‖` dropped below [`REST_TOL`].
    Rest,
    TSpan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub t: f64,
    pub psi: f64,
    pub theta: f64,
}

impl PhasePoint {
    pub fn state(&self) -> PhaseState {
        PhaseState::new(self.psi, self.theta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTrace {
    pub points: Vec<PhasePoint>,
    pub end: TraceEnd,
}

impl PhaseTrace {
    pub fn last(&self) -> PhaseState {
        self.points.last().expect("trace has points").state()
    }
}

/// Integrates from `start` to time `t_end` (negative for backward time),
/// stopping early at rest.
pub fn trace_direction(start: PhaseState, alpha: Alpha, t_end: f64) -> Result<PhaseTrace> {
    let f = |_t: f64, y: &[f64; 2]| rhs_phase(&PhaseState::new(y[0], y[1]), alpha);
    let mut points = vec![PhasePoint { t: 0.0, psi: start.psi, theta: start.theta }];
    let mut end = TraceEnd::TSpan;
    let at_rest = |y: &[f64; 2]| {
        let r = f(0.0, y);
        r[0].hypot(r[1]) < REST_TOL
    };
    if at_rest(&[start.psi, start.theta]) {
        return Ok(PhaseTrace { points, end: TraceEnd::Rest });
    }
    ode::integrate(f, 0.0, [start.psi, start.theta], t_end, &ode::Options::default(), |st| {
        points.push(PhasePoint { t: st.t1, psi: st.y1[0], theta: st.y1[1] });
        if at_rest(&st.y1) {
            end = TraceEnd::Rest;
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    Ok(PhaseTrace { points, end })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSidedTrace {
    pub forward: PhaseTrace,
    pub backward: PhaseTrace,
}

/// Traces both time directions, since the orientation of `t` relative to
/// arc length depends on the sign of `x`.
pub fn trace_phase_trajectory(start: PhaseState, alpha: Alpha, t_span: f64) -> Result<TwoSidedTrace> {
    Ok(TwoSidedTrace {
        forward: trace_direction(start, alpha, t_span.abs())?,
        backward: trace_direction(start, alpha, -t_span.abs())?,
    })
}

pub const DEFAULT_T_SPAN: f64 = 2000.0;

/// Forward trace of the unstable manifold of `(0, π/2)` on the side
/// `sign · (α, −2)`. `sign = 1` is the branch traced by axis solutions
/// (ψ has the sign of α, θ decreasing from π/2).
pub fn unstable_manifold(alpha: Alpha, sign: f64) -> Result<PhaseTrace> {
    let v = unstable_direction_p3(alpha);
    let s = -sign.signum() * MANIFOLD_DELTA;
    let start = PhaseState::new(s * v[0], FRAC_PI_2 + s * v[1]);
    trace_direction(start, alpha, DEFAULT_T_SPAN)
}

/// Equilibrium to which the axis branch of the unstable manifold tends:
/// `P1` for `α > −2`, `P2` for `α < −2`; `None` at the center `α = −2`.
pub fn predicted_limit(alpha: Alpha) -> Option<PhaseState> {
    let a = alpha.value();
    if a > -2.0 {
        Some(representative(Family::P1))
    } else if a < -2.0 {
        Some(representative(Family::P2))
    } else {
        None
    }
}

/// Nearest equilibrium among `P1, P2, P3` lattices.
pub fn nearest_equilibrium(state: &PhaseState) -> (PhaseState, Family) {
    let psi_n = (state.psi / PI).round() * PI;
    let cands = [
        PhaseState::new(psi_n, (state.theta / PI).round() * PI),
        PhaseState::new(psi_n, ((state.theta - FRAC_PI_2) / PI).round() * PI + FRAC_PI_2),
    ];
    let best = if state.distance(&cands[0]) <= state.distance(&cands[1]) { cands[0] } else { cands[1] };
    let fam = identify(&best).expect("lattice point is an equilibrium");
    (best, fam)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedOrbit {
    pub period: f64,
    pub return_gap: f64,
}

/// First return to the horizontal line through `start`, crossing in the
/// same direction; `None` if no return occurs before `t_max`.
pub fn closed_orbit(start: PhaseState, alpha: Alpha, t_max: f64) -> Result<Option<ClosedOrbit>> {
    let f = |_t: f64, y: &[f64; 2]| rhs_phase(&PhaseState::new(y[0], y[1]), alpha);
    let dir0 = f(0.0, &[start.psi, start.theta])[1].signum();
    let mut found = None;
    ode::integrate(f, 0.0, [start.psi, start.theta], t_max, &ode::Options::default(), |st| {
        let g0 = st.y0[1] - start.theta;
        let g1 = st.y1[1] - start.theta;
        if st.t0 > 0.0 && g0 != 0.0 && (g0 > 0.0) != (g1 > 0.0) && (g1 - g0).signum() == dir0 {
            let t = st.locate(|_, y| y[1] - start.theta, 1e-13);
            let y = st.interp(t);
            found = Some(ClosedOrbit { period: t, return_gap: (y[0] - start.psi).hypot(y[1] - start.theta) });
            return Control::Stop;
        }
        Control::Continue
    })?;
    Ok(found)
}

/// A generating curve in the `(ψ, θ)` plane with the tangent alignment
/// against the vector field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProjection {
    pub s: Vec<f64>,
    pub psi: Vec<f64>,
    pub theta: Vec<f64>,
    /// Angle between `(ψ'(s), θ'(s))` and the field, `NaN` where the field
    /// is below [`ALIGN_FLOOR`].
    pub alignment: Vec<f64>,
}

/// Field magnitude below which alignment is not measured.
pub const ALIGN_FLOOR: f64 = 1e-8;

impl PhaseProjection {
    pub fn max_misalignment(&self) -> f64 {
        self.alignment.iter().filter(|a| !a.is_nan()).fold(0.0, |m, &a| m.max(a))
    }

    pub fn state(&self, i: usize) -> PhaseState {
        PhaseState::new(self.psi[i], self.theta[i])
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Alignment of central finite differences of the samples with the
    /// field, skipping points below the field floor and uneven spacings.
    pub fn finite_difference_misalignment(&self, alpha: Alpha) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 1..self.len().saturating_sub(1) {
            let (h0, h1) = (self.s[i] - self.s[i - 1], self.s[i + 1] - self.s[i]);
            if h0 <= 0.0 || (h1 - h0).abs() > 1e-6 * h0 {
                continue;
            }
            let d =
                [(self.psi[i + 1] - self.psi[i - 1]) / (h0 + h1), (self.theta[i + 1] - self.theta[i - 1]) / (h0 + h1)];
            let r = rhs_phase(&self.state(i), alpha);
            if r[0].hypot(r[1]) > ALIGN_FLOOR {
                worst = worst.max(angle_between(d, r));
            }
        }
        worst
    }
}

fn angle_between(a: [f64; 2], b: [f64; 2]) -> f64 {
    let cross = a[0] * b[1] - a[1] * b[0];
    let dot = a[0] * b[0] + a[1] * b[1];
    cross.atan2(dot).abs()
}

/// `(ψ(s), θ(s))` with `θ` continued along the curve, plus tangent alignment.
pub fn project_to_phase(traj: &Trajectory) -> Result<PhaseProjection> {
    let n = traj.samples.len();
    let mut out = PhaseProjection {
        s: Vec::with_capacity(n),
        psi: Vec::with_capacity(n),
        theta: Vec::with_capacity(n),
        alignment: Vec::with_capacity(n),
    };
    let mut prev: Option<f64> = None;
    for c in &traj.samples {
        if !(c.x > 0.0) && !(c.x == 0.0 && c.s == traj.first().s) {
            return Err(Error::NonPositiveRadius { s: c.s, x: c.x });
        }
        let raw = c.z.atan2(c.x);
        let theta = match prev {
            None => raw,
            Some(p) => raw + ((p - raw) / TAU).round() * TAU,
        };
        prev = Some(theta);
        let state = PhaseState::new(c.psi, theta);
        let field = rhs_phase(&state, traj.alpha);
        let r2 = c.x * c.x + c.z * c.z;
        let tangent = [c.dpsi, (c.x * c.psi.sin() - c.z * c.psi.cos()) / r2];
        let angle = if field[0].hypot(field[1]) > ALIGN_FLOOR { angle_between(tangent, field) } else { f64::NAN };
        out.s.push(c.s);
        out.psi.push(c.psi);
        out.theta.push(theta);
        out.alignment.push(angle);
    }
    Ok(out)
}

/// Window `[psi_min, psi_max] × [theta_min, theta_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub psi_min: f64,
    pub psi_max: f64,
    pub theta_min: f64,
    pub theta_max: f64,
}

impl Default for Window {
    fn default() -> Self {
        Self { psi_min: -1.5 * PI, psi_max: 1.5 * PI, theta_min: -PI, theta_max: PI }
    }
}

impl Window {
    pub fn contains(&self, p: &PhaseState) -> bool {
        p.psi >= self.psi_min && p.psi <= self.psi_max && p.theta >= self.theta_min && p.theta <= self.theta_max
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.psi_min, self.psi_max, self.theta_min, self.theta_max].iter().all(|v| v.is_finite())
            && self.psi_min < self.psi_max
            && self.theta_min < self.theta_max;
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid("window needs finite, increasing bounds".into()))
        }
    }
}

/// All equilibria inside the window.
pub fn equilibria_in(window: &Window, alpha: Alpha) -> Result<Vec<EquilibriumPoint>> {
    window.validate()?;
    let mut out = Vec::new();
    let n_lo = (window.psi_min / PI).ceil() as i64;
    let n_hi = (window.psi_max / PI).floor() as i64;
    let k_lo = (window.theta_min / FRAC_PI_2).ceil() as i64;
    let k_hi = (window.theta_max / FRAC_PI_2).floor() as i64;
    for n in n_lo..=n_hi {
        for k in k_lo..=k_hi {
            let p = PhaseState::new(n as f64 * PI, k as f64 * FRAC_PI_2);
            out.push(equilibrium(&p, alpha)?);
        }
    }
    Ok(out)
}

pub const FIELD_GRID: usize = 40;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Portrait {
    pub alpha: Alpha,
    pub window: Window,
    /// `(ψ, θ, dψ, dθ)` on a [`FIELD_GRID`]² lattice.
    pub field: Vec<[f64; 4]>,
    pub equilibria: Vec<EquilibriumPoint>,
    /// Stable and unstable manifolds of every saddle in the window.
    pub separatrices: Vec<Vec<[f64; 2]>>,
}

/// Field samples, equilibria and separatrices for plotting.
pub fn portrait(alpha: Alpha, window: Window) -> Result<Portrait> {
    use rayon::prelude::*;
    window.validate()?;
    let mut field = Vec::with_capacity(FIELD_GRID * FIELD_GRID);
    for i in 0..FIELD_GRID {
        for j in 0..FIELD_GRID {
            let psi = window.psi_min + (window.psi_max - window.psi_min) * (i as f64 + 0.5) / FIELD_GRID as f64;
            let theta = window.theta_min + (window.theta_max - window.theta_min) * (j as f64 + 0.5) / FIELD_GRID as f64;
            let r = rhs_phase(&PhaseState::new(psi, theta), alpha);
            field.push([psi, theta, r[0], r[1]]);
        }
    }
    let equilibria = equilibria_in(&window, alpha)?;
    let seeds: Vec<(PhaseState, f64)> = equilibria
        .iter()
        .filter(|e| e.klass == StabilityClass::Saddle)
        .flat_map(|e| {
            let m = jacobian_at(&e.location, alpha);
            let u = e.unstable_direction.expect("saddle has a direction");
            // stable eigenvector for λ = −1
            let (a, b) = (m[(0, 0)] + 1.0, m[(0, 1)]);
            let (c, d) = (m[(1, 0)], m[(1, 1)] + 1.0);
            let sv = if a.abs() + b.abs() >= c.abs() + d.abs() { [-b, a] } else { [-d, c] };
            let sn = sv[0].hypot(sv[1]);
            let sv = [sv[0] / sn, sv[1] / sn];
            let p = e.location;
            [1.0, -1.0].into_iter().flat_map(move |sg| {
                let d = MANIFOLD_DELTA * sg;
                [
                    (PhaseState::new(p.psi + d * u[0], p.theta + d * u[1]), 60.0),
                    (PhaseState::new(p.psi + d * sv[0], p.theta + d * sv[1]), -60.0),
                ]
            })
        })
        .collect();
    let separatrices = seeds
        .par_iter()
        .map(|(start, t)| {
            let tr = trace_direction(*start, alpha, *t)?;
            let margin = 0.5;
            Ok(tr
                .points
                .iter()
                .take_while(|p| {
                    p.psi >= window.psi_min - margin
                        && p.psi <= window.psi_max + margin
                        && p.theta >= window.theta_min - margin
                        && p.theta <= window.theta_max + margin
                })
                .map(|p| [p.psi, p.theta])
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Portrait { alpha, window, field, equilibria, separatrices })
}
