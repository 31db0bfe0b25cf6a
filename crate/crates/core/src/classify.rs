//! Qualitative verdicts for axis solutions, with the measurements behind
//! them.
//!
//! Every verdict is a finite-window certificate: e.g. `EntireGraph` means
//! the computed curve is a graph with `ψ ∈ (0, π/2)` out to `x ≥ 20·z0`,
//! not that it stays one forever.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::arclength::{integrate_with, EventKind, InitialData, IntegrateOptions, Mode, Trajectory};
use crate::geometry::{Alpha, Regime};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    EntireGraph,
    OscillatingGraphOutsideCompact,
    CircleOrigin,
    ClosedOscillating,
    CircleAlphaMinus4,
    ClosedBigraph,
    Inconclusive,
}

impl Verdict {
    /// The verdict the regime of `alpha` is expected to produce.
    pub fn expected_for(alpha: Alpha) -> Self {
        match alpha.regime() {
            Regime::Positive => Self::EntireGraph,
            Regime::NegTwoToZero => Self::OscillatingGraphOutsideCompact,
            Regime::ExactNegTwo => Self::CircleOrigin,
            Regime::NegFourToNegTwo => Self::ClosedOscillating,
            Regime::ExactNegFour => Self::CircleAlphaMinus4,
            Regime::BelowNegFour => Self::ClosedBigraph,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleFit {
    pub center: [f64; 2],
    pub radius: f64,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub axis_crossings: usize,
    /// Sign of `z` on each stretch between consecutive crossings.
    pub z_signs: Vec<i8>,
    pub min_norm: f64,
    pub max_x: f64,
    pub psi_range: [f64; 2],
    pub z_range: [f64; 2],
    pub min_abs_cos_after_last_crossing: Option<f64>,
    /// `max |x² + (z − c)² − ρ²| / z0²` against the regime's closed-form
    /// circle, for α = −2 and α = −4.
    pub closed_circle_residual: Option<f64>,
    pub circle_fit: Option<CircleFit>,
    pub self_intersections: usize,
    pub terminal: Option<EventKind>,
    pub s_end: f64,
    /// Crossings are truncated at the origin cutoff, so the count is a
    /// lower bound.
    pub crossings_lower_bound: bool,
    /// Crossings beyond the end of the run, predicted in phase time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continued: Option<PhaseContinuation>,
}

/// Continuation of an axis run past its last sample in phase time
/// `dt = ds/x`, on the state `(ψ, θ, ln x)`. Crossings of the x-axis are
/// sign changes of `θ`. Arc length between crossings grows geometrically
/// as α → 0⁻, while phase time between them stays near `π/ω`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseContinuation {
    pub t_end: f64,
    /// `ln x` at each predicted crossing.
    pub crossing_log_x: Vec<f64>,
    /// Over the whole continuation.
    pub min_abs_cos: f64,
}

impl PhaseContinuation {
    pub fn crossings(&self) -> usize {
        self.crossing_log_x.len()
    }
}

/// Longest phase time a continuation runs for. Past roughly 700 the
/// decaying `θ` underflows.
pub const CONTINUATION_T: f64 = 600.0;

/// A continuation stops after this many crossings.
pub const CONTINUATION_CROSSINGS: usize = 8;

/// Continues `traj` from its last sample for phase time up to `t_end`.
/// Only meaningful while `x > 0`, which holds for −2 < α < 0 axis runs.
pub fn phase_continuation(traj: &Trajectory, t_end: f64) -> Result<PhaseContinuation> {
    let c = traj.last();
    if !(c.x > 0.0) {
        return Err(Error::NonPositiveRadius { s: c.s, x: c.x });
    }
    let alpha = traj.alpha;
    let f = |_t: f64, y: &[f64; 3]| {
        let [h1, h2] = crate::phase::rhs_phase(&crate::phase::PhaseState::new(y[0], y[1]), alpha);
        [h1, h2, y[0].cos()]
    };
    // θ decays like e^{−(2+α)t/2}; a tiny atol keeps its sign meaningful
    let opts = crate::ode::Options { atol: 1e-300, ..Default::default() };
    let mut crossing_log_x = Vec::new();
    let mut min_abs_cos = c.psi.cos().abs();
    let mut t_stop = t_end;
    crate::ode::integrate(f, 0.0, [c.psi, c.z.atan2(c.x), c.x.ln()], t_end, &opts, |st| {
        min_abs_cos = min_abs_cos.min(st.y1[0].cos().abs());
        if st.y0[1] != 0.0 && st.y0[1].signum() != st.y1[1].signum() {
            let t = st.locate(|_, y| y[1], 1e-13);
            crossing_log_x.push(st.interp(t)[2]);
            if crossing_log_x.len() >= CONTINUATION_CROSSINGS {
                t_stop = st.t1;
                return crate::ode::Control::Stop;
            }
        }
        crate::ode::Control::Continue
    })?;
    Ok(PhaseContinuation { t_end: t_stop, crossing_log_x, min_abs_cos })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BehaviorReport {
    pub alpha: Alpha,
    pub z0: f64,
    pub regime: Regime,
    pub verdict: Verdict,
    pub evidence: Evidence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Thresholds used to accept a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub min_crossings: usize,
    /// Entire graph: required `max x / z0`.
    pub graph_extent: f64,
    /// Oscillation: required `|cos ψ|` after the last crossing.
    pub min_abs_cos: f64,
    /// Relative closed-form circle residual.
    pub circle_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { min_crossings: 3, graph_extent: 20.0, min_abs_cos: 0.1, circle_tol: 1e-8 }
    }
}

/// Least-squares circle through the points (algebraic fit).
pub fn circle_fit(points: &[[f64; 2]]) -> Result<CircleFit> {
    if points.len() < 10 {
        return Err(Error::TooFewSamples { needed: 10, got: points.len() });
    }
    let n = points.len() as f64;
    let mean = points.iter().fold([0.0, 0.0], |m, p| [m[0] + p[0] / n, m[1] + p[1] / n]);
    let scale = (points.iter().map(|p| (p[0] - mean[0]).powi(2) + (p[1] - mean[1]).powi(2)).sum::<f64>() / n).sqrt();
    if !(scale > 0.0) {
        return Err(Error::Collinear);
    }
    // u² + v² + D u + E v + F = 0 in normalized coordinates
    let a = DMatrix::from_fn(points.len(), 3, |i, j| {
        let (u, v) = ((points[i][0] - mean[0]) / scale, (points[i][1] - mean[1]) / scale);
        [u, v, 1.0][j]
    });
    let b = DVector::from_fn(points.len(), |i, _| {
        let (u, v) = ((points[i][0] - mean[0]) / scale, (points[i][1] - mean[1]) / scale);
        -(u * u + v * v)
    });
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-10 * sv.max() {
        return Err(Error::Collinear);
    }
    let sol = svd.solve(&b, 0.0).map_err(|e| Error::Degenerate(e.to_string()))?;
    let (cu, cv) = (-sol[0] / 2.0, -sol[1] / 2.0);
    let r2 = cu * cu + cv * cv - sol[2];
    if !(r2 > 0.0) || r2.sqrt() > 1e6 {
        return Err(Error::Collinear);
    }
    let center = [mean[0] + cu * scale, mean[1] + cv * scale];
    let radius = r2.sqrt() * scale;
    let max_residual =
        points.iter().map(|p| ((p[0] - center[0]).hypot(p[1] - center[1]) - radius).abs()).fold(0.0, f64::max);
    Ok(CircleFit { center, radius, max_residual })
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn cross_transversally(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// Transverse crossings between non-adjacent segments of the polyline.
pub fn self_intersection_count(points: &[[f64; 2]]) -> usize {
    if points.len() < 4 {
        return 0;
    }
    let m = points.len() - 1;
    let bounds = |i: usize| {
        let (a, b) = (points[i], points[i + 1]);
        (a[0].min(b[0]), a[0].max(b[0]), a[1].min(b[1]), a[1].max(b[1]))
    };
    // sweep over segments sorted by their left end
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| bounds(i).0.total_cmp(&bounds(j).0));
    let mut count = 0;
    for (oi, &i) in order.iter().enumerate() {
        let bi = bounds(i);
        for &j in &order[oi + 1..] {
            let bj = bounds(j);
            if bj.0 > bi.1 {
                break;
            }
            if i.abs_diff(j) <= 1 || bj.3 < bi.2 || bj.2 > bi.3 {
                continue;
            }
            if cross_transversally(points[i], points[i + 1], points[j], points[j + 1]) {
                count += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryCircle {
    pub s: f64,
    pub radius: f64,
    pub height: f64,
}

/// Boundary circle of the surface obtained by revolving the curve up to `s_cut`.
pub fn boundary_circle_extract(traj: &Trajectory, s_cut: f64) -> Result<BoundaryCircle> {
    let c = traj.state_at(s_cut)?;
    Ok(BoundaryCircle { s: s_cut, radius: c.x, height: c.z })
}

fn closed_circle_residual(traj: &Trajectory) -> Option<f64> {
    let z0 = traj.init.scale;
    let (cz, rho) = match traj.alpha.regime() {
        Regime::ExactNegTwo => (0.0, z0),
        Regime::ExactNegFour => (z0 / 2.0, z0 / 2.0),
        _ => return None,
    };
    Some(
        traj.samples.iter().map(|c| (c.x * c.x + (c.z - cz).powi(2) - rho * rho).abs() / (z0 * z0)).fold(0.0, f64::max),
    )
}

pub fn evidence(traj: &Trajectory) -> Evidence {
    let pts: Vec<[f64; 2]> = traj.samples.iter().map(|c| [c.x, c.z]).collect();
    let crossings: Vec<f64> = traj.events_of(EventKind::CrossXAxis).map(|e| e.s).collect();
    let mut z_signs = Vec::new();
    let mut bounds = vec![f64::NEG_INFINITY];
    bounds.extend(&crossings);
    bounds.push(f64::INFINITY);
    for w in bounds.windows(2) {
        // z at the sample of largest |z| inside the stretch
        let z = traj.samples.iter().filter(|c| c.s > w[0] && c.s < w[1]).map(|c| c.z).fold(0.0f64, |m, z| {
            if z.abs() > m.abs() {
                z
            } else {
                m
            }
        });
        if z != 0.0 {
            z_signs.push(z.signum() as i8);
        }
    }
    let interior = traj.samples.iter().filter(|c| c.s > traj.first().s);
    let (mut psi_lo, mut psi_hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in interior {
        psi_lo = psi_lo.min(c.psi);
        psi_hi = psi_hi.max(c.psi);
    }
    let min_abs_cos_after_last_crossing = crossings.last().map(|&s_last| {
        traj.samples.iter().filter(|c| c.s > s_last).map(|c| c.psi.cos().abs()).fold(f64::INFINITY, f64::min)
    });
    let circle = closed_circle_residual(traj);
    let circle_fit = circle.and_then(|_| circle_fit(&pts).ok());
    Evidence {
        axis_crossings: crossings.len(),
        z_signs,
        min_norm: traj.samples.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min),
        max_x: traj.samples.iter().map(|c| c.x).fold(f64::NEG_INFINITY, f64::max),
        psi_range: [psi_lo, psi_hi],
        z_range: [
            traj.samples.iter().map(|c| c.z).fold(f64::INFINITY, f64::min),
            traj.samples.iter().map(|c| c.z).fold(f64::NEG_INFINITY, f64::max),
        ],
        min_abs_cos_after_last_crossing,
        closed_circle_residual: circle,
        circle_fit,
        self_intersections: self_intersection_count(&pts),
        terminal: traj.terminal_event().map(|e| e.kind),
        s_end: traj.last().s,
        crossings_lower_bound: traj.alpha.regime() == Regime::NegFourToNegTwo,
        continued: None,
    }
}

/// Verdict with the default thresholds.
pub fn classify(traj: &Trajectory) -> Result<BehaviorReport> {
    classify_with(traj, &Thresholds::default())
}

pub fn classify_with(traj: &Trajectory, th: &Thresholds) -> Result<BehaviorReport> {
    if traj.init.mode != Mode::Axis {
        return Err(Error::WrongMode("classification needs axis initial data"));
    }
    classify_evidence(traj, evidence(traj), th)
}

fn classify_evidence(traj: &Trajectory, ev: Evidence, th: &Thresholds) -> Result<BehaviorReport> {
    let z0 = traj.init.scale;
    let regime = traj.alpha.regime();
    let check = |ok: bool, why: String| if ok { None } else { Some(why) };
    let failure = match regime {
        Regime::Positive => {
            let x_monotone = traj.samples.windows(2).all(|w| w[1].x > w[0].x);
            check(ev.psi_range[0] > 0.0, format!("psi reaches {}", ev.psi_range[0]))
                .or_else(|| check(ev.psi_range[1] < FRAC_PI_2, format!("psi reaches {}", ev.psi_range[1])))
                .or_else(|| check(x_monotone, "x is not monotone".into()))
                .or_else(|| {
                    check(
                        ev.max_x >= th.graph_extent * z0,
                        format!("max x {} below {}·z0; extend s_max", ev.max_x, th.graph_extent),
                    )
                })
        }
        Regime::NegTwoToZero => {
            let extra = ev.continued.as_ref().map_or(0, |p| p.crossings());
            let total = ev.axis_crossings + extra;
            check(total >= th.min_crossings, format!("{total} axis crossings, need {}; extend s_max", th.min_crossings))
                .or_else(|| {
                    let mut c = ev.min_abs_cos_after_last_crossing.unwrap_or(0.0);
                    if let Some(p) = &ev.continued {
                        c = c.min(p.min_abs_cos);
                    }
                    check(c > th.min_abs_cos, format!("|cos psi| drops to {c} after the last crossing"))
                })
        }
        Regime::ExactNegTwo | Regime::ExactNegFour => {
            let r = ev.closed_circle_residual.unwrap_or(f64::INFINITY);
            check(r < th.circle_tol, format!("circle residual {r:e}"))
        }
        Regime::NegFourToNegTwo => check(
            ev.terminal == Some(EventKind::OriginApproach),
            format!("run ended with {:?}, not at the origin", ev.terminal),
        )
        .or_else(|| {
            check(
                ev.axis_crossings >= th.min_crossings,
                format!("{} axis crossings before the origin cutoff, need {}", ev.axis_crossings, th.min_crossings),
            )
        }),
        Regime::BelowNegFour => {
            let apex =
                traj.samples.iter().enumerate().max_by(|a, b| a.1.z.total_cmp(&b.1.z)).map(|(i, _)| i).unwrap_or(0);
            let monotone = traj.samples[apex..].windows(2).all(|w| w[1].z < w[0].z);
            check(
                ev.terminal == Some(EventKind::OriginApproach),
                format!("run ended with {:?}, not at the origin", ev.terminal),
            )
            .or_else(|| check(ev.z_range[0] > 0.0, format!("z reaches {}", ev.z_range[0])))
            .or_else(|| check(monotone, "z is not monotone after the apex".into()))
        }
    };
    let (verdict, reason) = match failure {
        None => (Verdict::expected_for(traj.alpha), None),
        Some(r) => (Verdict::Inconclusive, Some(r)),
    };
    Ok(BehaviorReport { alpha: traj.alpha, z0, regime, verdict, evidence: ev, reason })
}

/// Run parameters chosen per regime by [`classify_axis`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriverOptions {
    pub thresholds: Thresholds,
    /// Initial arc-length budget, relative to z0.
    pub s_max: f64,
    /// Largest budget tried when crossings are still missing.
    pub s_max_cap: f64,
    /// Origin cutoffs tried in turn for −4 < α < −2.
    pub origin_eps_ladder: [f64; 3],
}

impl Default for DriverOptions {
    fn default() -> Self {
        Self { thresholds: Thresholds::default(), s_max: 50.0, s_max_cap: 5e5, origin_eps_ladder: [1e-7, 1e-10, 1e-13] }
    }
}

/// Sample spacing for a run of length `s_max`, keeping runs to a few
/// hundred thousand stored samples.
fn spacing_for(s_max: f64) -> f64 {
    (s_max / 2e5).max(1e-3)
}

/// Integrates the axis solution with regime-appropriate settings and
/// classifies it: long runs for −2 < α < 0 (crossings spread out
/// geometrically), small origin cutoffs for −4 < α < −2 (crossings
/// accumulate at the origin).
pub fn classify_axis(alpha: Alpha, z0: f64, opts: &DriverOptions) -> Result<(Trajectory, BehaviorReport)> {
    let init = InitialData::axis(z0)?;
    let th = &opts.thresholds;
    match alpha.regime() {
        Regime::NegTwoToZero => {
            let mut s_max = opts.s_max;
            loop {
                let io = IntegrateOptions { max_ds: spacing_for(s_max), ..Default::default() };
                let traj = integrate_with(init, alpha, s_max * z0, &io)?;
                let report = classify_with(&traj, th)?;
                let ran_out = traj.terminal_event().map(|e| e.kind) == Some(EventKind::SMax);
                if report.verdict != Verdict::Inconclusive
                    || traj.count(EventKind::CrossXAxis) >= th.min_crossings
                    || !ran_out
                {
                    return Ok((traj, report));
                }
                if s_max >= opts.s_max_cap {
                    let mut ev = report.evidence;
                    ev.continued = Some(phase_continuation(&traj, CONTINUATION_T)?);
                    let report = classify_evidence(&traj, ev, th)?;
                    return Ok((traj, report));
                }
                s_max = (s_max * 10.0).min(opts.s_max_cap);
            }
        }
        Regime::NegFourToNegTwo => {
            let mut last = None;
            for eps in opts.origin_eps_ladder {
                let io =
                    IntegrateOptions { origin_eps: eps, x_eps: eps * 1e-2, atol: eps * 1e-9, ..Default::default() };
                let traj = integrate_with(init, alpha, opts.s_max * z0, &io)?;
                let report = classify_with(&traj, th)?;
                let done = report.verdict != Verdict::Inconclusive;
                last = Some((traj, report));
                if done {
                    break;
                }
            }
            Ok(last.expect("ladder is nonempty"))
        }
        _ => {
            let traj = integrate_with(init, alpha, opts.s_max * z0, &IntegrateOptions::default())?;
            let report = classify_with(&traj, th)?;
            Ok((traj, report))
        }
    }
}
