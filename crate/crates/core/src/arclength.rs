//! Generating curves `γ(s) = (x(s), 0, z(s))` in arc-length form:
//!
//! ```text
//! x' = cos ψ,   z' = sin ψ,
//! ψ' = α (z cos ψ − x sin ψ) / (x² + z²) − sin ψ / x.
//! ```
//!
//! Axis data `(0, z0, 0)` is singular; those runs start from the Picard
//! solution of the radial problem and switch to the arc-length system at a
//! small radius. Plane data `(x0, 0, π/2)` starts directly.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::geometry::{check_dilation, stationary_residual, Alpha, Similarity, SurfaceSample};
use crate::ode::{self, Control, Step};
use crate::quadrature::cumulative_simpson;
use crate::singular::{self, second_derivative};
use crate::{Error, Result};

/// One sample of a generating curve. `dpsi` is `ψ'(s)`, the curvature of the
/// profile, evaluated from the equation at the sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveState {
    pub s: f64,
    pub x: f64,
    pub z: f64,
    pub psi: f64,
    pub dpsi: f64,
}

impl CurveState {
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.z)
    }

    /// Point of the revolved surface at rotation angle `t`.
    pub fn surface_sample(&self, t: f64) -> Result<SurfaceSample> {
        SurfaceSample::on_revolution(self.x, self.z, self.psi, self.dpsi, t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    CrossXAxis,
    VerticalTangent,
    HorizontalTangent,
    OriginApproach,
    /// `x` fell below the collapse threshold with the tangent far from
    /// orthogonal to the axis.
    XCollapse,
    /// `x` fell below the collapse threshold while crossing the axis
    /// orthogonally: the curve closes smoothly at the axis.
    AxisReturn,
    SMax,
}

impl EventKind {
    pub fn is_terminal(self) -> bool {
        matches!(self, Self::OriginApproach | Self::XCollapse | Self::AxisReturn | Self::SMax)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub kind: EventKind,
    pub s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Axis,
    Plane,
}

/// Initial data. `scale` is `z0` for axis data `(0, z0, 0)` and `x0` for
/// plane data `(x0, 0, π/2)`; both default to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialData {
    pub mode: Mode,
    pub scale: f64,
}

impl InitialData {
    pub fn axis(z0: f64) -> Result<Self> {
        if !(z0 > 0.0) || !z0.is_finite() {
            return Err(Error::NonPositive { name: "z0", value: z0 });
        }
        Ok(Self { mode: Mode::Axis, scale: z0 })
    }

    pub fn plane(x0: f64) -> Result<Self> {
        if !(x0 > 0.0) || !x0.is_finite() {
            return Err(Error::NonPositive { name: "x0", value: x0 });
        }
        Ok(Self { mode: Mode::Plane, scale: x0 })
    }
}

/// Tolerances and thresholds. Lengths are relative to the initial-data scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Stop when `|p| < origin_eps·scale` moving inward.
    pub origin_eps: f64,
    /// Stop when `x < x_eps·scale`.
    pub x_eps: f64,
    /// Largest gap between stored samples.
    pub max_ds: f64,
    pub max_steps: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, origin_eps: 1e-3, x_eps: 1e-6, max_ds: 1e-3, max_steps: 2_000_000 }
    }
}

/// Default arc-length budget `50·scale`.
pub const DEFAULT_S_MAX_FACTOR: f64 = 50.0;

/// `|sin ψ|` below which an axis approach counts as orthogonal.
pub const ORTHOGONAL_SIN_TOL: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub alpha: Alpha,
    pub init: InitialData,
    pub samples: Vec<CurveState>,
    pub events: Vec<Event>,
}

impl Trajectory {
    pub fn first(&self) -> &CurveState {
        &self.samples[0]
    }

    pub fn last(&self) -> &CurveState {
        self.samples.last().expect("trajectory has samples")
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.events_of(kind).count()
    }

    pub fn terminal_event(&self) -> Option<&Event> {
        self.events.iter().rev().find(|e| e.kind.is_terminal())
    }

    /// Pointwise `|H − α⟨ν,p⟩/|p|²|` of the revolved surface with
    /// `κ₁ = ψ'`, `κ₂ = sin ψ / x` (the residual is independent of the
    /// rotation angle).
    pub fn residuals(&self) -> Result<Vec<f64>> {
        self.samples
            .iter()
            .map(|c| c.surface_sample(0.0).and_then(|s| stationary_residual(&s, self.alpha)).map(f64::abs))
            .collect()
    }

    pub fn max_residual(&self) -> Result<f64> {
        Ok(self.residuals()?.into_iter().fold(0.0, f64::max))
    }

    /// State interpolated linearly in `s` (used for cuts and comparisons).
    pub fn state_at(&self, s: f64) -> Result<CurveState> {
        let lo = self.first().s;
        let hi = self.last().s;
        if !(s >= lo && s <= hi) {
            return Err(Error::OutOfRange { s, lo, hi });
        }
        let i = self.samples.partition_point(|c| c.s < s);
        if i == 0 {
            return Ok(self.samples[0]);
        }
        let (a, b) = (&self.samples[i - 1], &self.samples[i]);
        let w = if b.s == a.s { 1.0 } else { (s - a.s) / (b.s - a.s) };
        let lerp = |p: f64, q: f64| p + w * (q - p);
        Ok(CurveState { s, x: lerp(a.x, b.x), z: lerp(a.z, b.z), psi: lerp(a.psi, b.psi), dpsi: lerp(a.dpsi, b.dpsi) })
    }
}

type EventFn = fn(&[f64; 3]) -> f64;

/// `(x', z', ψ')` of the arc-length system.
pub fn rhs(state: &CurveState, alpha: Alpha) -> Result<[f64; 3]> {
    if !(state.x > 0.0) {
        return Err(Error::Singular { x: state.x });
    }
    Ok(rhs_raw(alpha.value(), state.x, state.z, state.psi))
}

#[inline]
fn rhs_raw(alpha: f64, x: f64, z: f64, psi: f64) -> [f64; 3] {
    let (sp, cp) = psi.sin_cos();
    let r2 = x * x + z * z;
    [cp, sp, alpha * (z * cp - x * sp) / r2 - sp / x]
}

/// Integrates from the given initial data up to arc length `s_max` with the
/// default options.
pub fn integrate(init: InitialData, alpha: Alpha, s_max: f64) -> Result<Trajectory> {
    integrate_with(init, alpha, s_max, &IntegrateOptions::default())
}

pub fn integrate_with(init: InitialData, alpha: Alpha, s_max: f64, opts: &IntegrateOptions) -> Result<Trajectory> {
    if !(s_max > 0.0) {
        return Err(Error::NonPositive { name: "s_max", value: s_max });
    }
    let scale = init.scale;
    let a = alpha.value();
    let mut samples = match init.mode {
        Mode::Axis => axis_start(alpha, scale)?,
        Mode::Plane => {
            let psi = FRAC_PI_2;
            vec![CurveState { s: 0.0, x: scale, z: 0.0, psi, dpsi: rhs_raw(a, scale, 0.0, psi)[2] }]
        }
    };
    let mut events = Vec::new();
    let start = *samples.last().unwrap();
    if start.s >= s_max {
        samples.retain(|c| c.s <= s_max);
        events.push(Event { kind: EventKind::SMax, s: samples.last().unwrap().s });
        return Ok(Trajectory { alpha, init, samples, events });
    }

    let ode_opts = ode::Options {
        rtol: opts.rtol,
        atol: opts.atol * scale,
        h_init: None,
        h_max: f64::INFINITY,
        h_min: 1e-15,
        max_steps: opts.max_steps,
    };
    let origin_eps = opts.origin_eps * scale;
    let x_eps = opts.x_eps * scale;
    let max_ds = opts.max_ds * scale;
    let zero_tol = 1e-15 * scale;
    let mut first_step = true;

    let f = |_s: f64, y: &[f64; 3]| {
        if y[0] > 0.0 {
            rhs_raw(a, y[0], y[1], y[2])
        } else {
            [f64::NAN; 3]
        }
    };
    let to_state =
        |s: f64, y: &[f64; 3]| CurveState { s, x: y[0], z: y[1], psi: y[2], dpsi: rhs_raw(a, y[0], y[1], y[2])[2] };

    let outcome = ode::integrate(f, start.s, [start.x, start.z, start.psi], s_max, &ode_opts, |st: &Step<3>| {
        let loc_tol = 1e-12;
        // terminal crossings
        let mut terminal: Option<(f64, EventKind)> = None;
        let r0 = st.y0[0].hypot(st.y0[1]);
        let r1 = st.y1[0].hypot(st.y1[1]);
        if r0 >= origin_eps && r1 < origin_eps {
            let s = st.locate(|_, y| y[0].hypot(y[1]) - origin_eps, loc_tol);
            terminal = Some((s, EventKind::OriginApproach));
        }
        if st.y0[0] >= x_eps && st.y1[0] < x_eps {
            let s = st.locate(|_, y| y[0] - x_eps, loc_tol);
            if terminal.is_none_or(|(t, _)| s < t) {
                let y = st.interp(s);
                let kind =
                    if y[2].sin().abs() < ORTHOGONAL_SIN_TOL { EventKind::AxisReturn } else { EventKind::XCollapse };
                terminal = Some((s, kind));
            }
        }
        let s_end = terminal.map_or(st.t1, |(s, _)| s);

        // sign-change events
        let funcs: [(EventKind, EventFn); 3] = [
            (EventKind::CrossXAxis, |y| y[1]),
            (EventKind::VerticalTangent, |y| y[2].cos()),
            (EventKind::HorizontalTangent, |y| y[2].sin()),
        ];
        let mut found: Vec<Event> = Vec::new();
        for (kind, g) in funcs {
            let g0 = g(&st.y0);
            let g1 = g(&st.y1);
            let tiny = if kind == EventKind::CrossXAxis { zero_tol } else { 1e-15 };
            if g0 == 0.0 || (first_step && g0.abs() <= tiny) {
                continue;
            }
            if g1 == 0.0 || (g0 > 0.0) != (g1 > 0.0) {
                let s = st.locate(|_, y| g(y), loc_tol);
                if s <= s_end {
                    found.push(Event { kind, s });
                }
            }
        }
        found.sort_by(|p, q| p.s.total_cmp(&q.s));
        events.extend(found);
        first_step = false;

        // samples
        let s_prev = samples.last().unwrap().s;
        let gap = s_end - s_prev;
        if gap > max_ds {
            let n = (gap / max_ds).ceil() as usize;
            for j in 1..n {
                let s = s_prev + gap * j as f64 / n as f64;
                samples.push(to_state(s, &st.interp(s)));
            }
        }
        match terminal {
            Some((s, kind)) => {
                samples.push(to_state(s, &st.interp(s)));
                events.push(Event { kind, s });
                Control::Stop
            }
            None => {
                samples.push(to_state(st.t1, &st.y1));
                Control::Continue
            }
        }
    })?;
    if !outcome.stopped {
        events.push(Event { kind: EventKind::SMax, s: outcome.t });
    }
    // guard against coincident samples from locating at a step boundary
    samples.dedup_by(|b, a| b.s <= a.s);
    Ok(Trajectory { alpha, init, samples, events })
}

/// Largest radius at which the axis profile hands over to the arc-length system.
pub fn handoff_radius(z0: f64, solved_radius: f64) -> f64 {
    (0.05 * z0).min(solved_radius)
}

fn axis_start(alpha: Alpha, z0: f64) -> Result<Vec<CurveState>> {
    let (profile, _report) = singular::solve_axis(alpha, z0)?;
    let r_h = handoff_radius(z0, profile.radius());
    let n = profile.grid.partition_point(|&r| r <= r_h * (1.0 + 1e-12));
    if n < 4 {
        return Err(Error::Handoff(format!("only {n} profile nodes below the handoff radius")));
    }
    let h = profile.grid[1] - profile.grid[0];
    let speed: Vec<f64> = profile.du[..n].iter().map(|d| (1.0 + d * d).sqrt()).collect();
    let arc = cumulative_simpson(&speed, h);
    let states: Vec<CurveState> = (0..n)
        .map(|i| {
            let (r, u, du) = (profile.grid[i], profile.u[i], profile.du[i]);
            let w = 1.0 + du * du;
            CurveState {
                s: arc[i],
                x: r,
                z: u,
                psi: du.atan(),
                dpsi: second_derivative(alpha, r, u, du) / (w * w.sqrt()),
            }
        })
        .collect();

    // the profile's own slope must agree with ψ' from the arc-length system
    let last = states[n - 1];
    if last.du_too_steep() {
        return Err(Error::Handoff("slope too large at the handoff radius".into()));
    }
    let from_system = rhs(&last, alpha)?[2];
    let (p, q) = (&states[n - 3], &states[n - 1]);
    let fd = (q.psi - p.psi) / (q.s - p.s);
    let fd_tol = 1e-6 + 1e-3 * from_system.abs();
    if (fd - from_system).abs() > fd_tol.max(10.0 * (q.s - p.s).powi(2) * (1.0 + from_system.abs()) / (z0 * z0)) {
        return Err(Error::Handoff(format!("curvature mismatch {fd} vs {from_system}")));
    }
    Ok(states)
}

impl CurveState {
    fn du_too_steep(&self) -> bool {
        self.psi.tan().abs() > singular::SLOPE_LIMIT
    }
}

/// The map `(x, z, ψ)(s) ↦ (x(−s), −z(−s), π − ψ(−s))` applied to every
/// sample, with samples re-sorted by arc length.
pub fn reflect_samples(samples: &[CurveState]) -> Vec<CurveState> {
    samples
        .iter()
        .rev()
        .map(|c| CurveState { s: -c.s, x: c.x, z: -c.z, psi: std::f64::consts::PI - c.psi, dpsi: c.dpsi })
        .collect()
}

/// Extends a plane-data solution to negative arc length by its mirror image
/// in the x-axis, glued at `s = 0`.
pub fn reflect_plane_solution(traj: &Trajectory) -> Result<Trajectory> {
    if traj.init.mode != Mode::Plane {
        return Err(Error::WrongMode("reflection needs plane initial data"));
    }
    let mut samples = reflect_samples(&traj.samples);
    samples.pop(); // s = 0 is shared
    samples.extend_from_slice(&traj.samples);
    let mut events: Vec<Event> = traj.events.iter().rev().map(|e| Event { kind: e.kind, s: -e.s }).collect();
    events.extend_from_slice(&traj.events);
    Ok(Trajectory { alpha: traj.alpha, init: traj.init, samples, events })
}

/// `(λx(s/λ), λz(s/λ), ψ(s/λ))`, parametrized by arc length.
pub fn dilate_trajectory(traj: &Trajectory, lambda: f64) -> Result<Trajectory> {
    check_dilation(lambda)?;
    Ok(Trajectory {
        alpha: traj.alpha,
        init: InitialData { mode: traj.init.mode, scale: traj.init.scale * lambda },
        samples: traj
            .samples
            .iter()
            .map(|c| CurveState {
                s: c.s * lambda,
                x: c.x * lambda,
                z: c.z * lambda,
                psi: c.psi,
                dpsi: c.dpsi / lambda,
            })
            .collect(),
        events: traj.events.iter().map(|e| Event { kind: e.kind, s: e.s * lambda }).collect(),
    })
}

impl Similarity for Trajectory {
    fn dilate(&self, lambda: f64) -> Result<Self> {
        dilate_trajectory(self, lambda)
    }
}
