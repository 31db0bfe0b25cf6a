//! The radial problem at the rotation axis.
//!
//! A generating curve that meets the axis orthogonally is locally a graph
//! `z = u(r)` solving
//!
//! ```text
//! (r f(u'))' = r g(r, u, u'),   u(0) = u0,   u'(0) = 0,
//! f(y) = y / sqrt(1 + y²),     g(x, y, z) = α (y − x z) / ((x² + y²) sqrt(1 + z²)),
//! ```
//!
//! which is singular at `r = 0`. It is solved as the fixed point of
//!
//! ```text
//! (T u)(r) = u0 + ∫_0^r f⁻¹( ∫_0^s (t/s) g(t, u, u') dt ) ds
//! ```
//!
//! on a uniform grid, with the radius `R` and ball `‖u − u0‖_{C¹} ≤ ε` chosen
//! so that `T` is a contraction with constant ½.

use serde::Serialize;

use crate::geometry::Alpha;
use crate::ode::{self, Control, Options};
use crate::quadrature::cumulative_simpson;
use crate::{Error, Result};

/// `2⁹ + 1` nodes on `[0, R]`.
pub const GRID_POINTS: usize = 513;

/// Graph representation `(r, u, u')` of a solution near the axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
}

impl RadialProfile {
    /// The constant profile `u ≡ u0`, `u' ≡ 0` on `n` uniform nodes of `[0, radius]`.
    pub fn constant(u0: f64, radius: f64, n: usize) -> Self {
        let grid = uniform_grid(radius, n);
        Self { u: vec![u0; n], du: vec![0.0; n], grid }
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn radius(&self) -> f64 {
        self.grid.last().copied().unwrap_or(0.0)
    }

    /// `‖u − w‖_∞ + ‖u' − w'‖_∞` on a common grid.
    pub fn c1_distance(&self, other: &RadialProfile) -> f64 {
        let d0 = self.u.iter().zip(&other.u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let d1 = self.du.iter().zip(&other.du).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        d0 + d1
    }

    /// C¹ distance to the constant `u0`.
    pub fn c1_distance_to_constant(&self, u0: f64) -> f64 {
        let d0 = self.u.iter().map(|u| (u - u0).abs()).fold(0.0, f64::max);
        let d1 = self.du.iter().map(|d| d.abs()).fold(0.0, f64::max);
        d0 + d1
    }

    fn spacing(&self) -> f64 {
        if self.grid.len() < 2 {
            0.0
        } else {
            self.grid[1] - self.grid[0]
        }
    }
}

pub fn uniform_grid(radius: f64, n: usize) -> Vec<f64> {
    let last = (n.max(2) - 1) as f64;
    (0..n).map(|i| radius * i as f64 / last).collect()
}

/// `f(y) = y / sqrt(1 + y²)`.
#[inline]
pub fn f(y: f64) -> f64 {
    y / (1.0 + y * y).sqrt()
}

/// `f⁻¹(x) = x / sqrt(1 − x²)` on `(−1, 1)`.
#[inline]
pub fn f_inv(x: f64) -> f64 {
    x / (1.0 - x * x).sqrt()
}

/// Right-hand side `g(x, y, z)` of the integrated radial equation.
#[inline]
pub fn g(alpha: Alpha, x: f64, y: f64, z: f64) -> f64 {
    alpha.value() * (y - x * z) / ((x * x + y * y) * (1.0 + z * z).sqrt())
}

/// Constants of the contraction argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointConfig {
    pub epsilon: f64,
    /// Bound `|α|(u0 + 2)/(u0 − ε)²` on `|g|` over the ball.
    pub m_bound: f64,
    /// Solve radius `R`.
    pub radius: f64,
    /// Lipschitz constant of `f⁻¹` on `[−½, ½]`.
    pub lip_f_inv: f64,
    /// Lipschitz constant of `g` in `(y, z)` on `[0, ε] × [u0 − ε, u0 + ε] × [−ε, ε]`
    /// with respect to `|Δy| + |Δz|`.
    pub lip_g: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub grid_points: usize,
}

impl FixedPointConfig {
    /// `min{1/M, (√3/2)ε, 2ε/(M√(4 + ε²))}`; the radius must be strictly below it.
    pub fn ball_radius_bound(&self) -> f64 {
        ball_radius_bound(self.m_bound, self.epsilon)
    }

    /// `min{1/√(L_f L_g), 1/(2 L_f L_g)}`.
    pub fn contraction_radius_bound(&self) -> f64 {
        let l = self.lip_f_inv * self.lip_g;
        (1.0 / l.sqrt()).min(0.5 / l)
    }

    /// Radius `min{0.1·u0, 10·R}`: larger than the certified radius, to be
    /// accepted only after checking the defect of the computed fixed point.
    pub fn pragmatic(&self, u0: f64) -> Self {
        Self { radius: (0.1 * u0).min(10.0 * self.radius), ..*self }
    }

    pub fn with_radius(&self, radius: f64) -> Self {
        Self { radius, ..*self }
    }

    /// Whether the radius satisfies both radius conditions of the
    /// contraction argument.
    pub fn is_certified(&self) -> bool {
        self.radius < self.ball_radius_bound() && self.radius <= self.contraction_radius_bound()
    }
}

fn ball_radius_bound(m: f64, eps: f64) -> f64 {
    (1.0 / m).min(3f64.sqrt() / 2.0 * eps).min(2.0 * eps / (m * (4.0 + eps * eps).sqrt()))
}

/// Default ball radius `min{1, u0}/2`.
pub fn default_epsilon(u0: f64) -> f64 {
    0.5 * u0.min(1.0)
}

/// Populates the constants of the contraction argument for `(α, u0, ε)`.
pub fn bounds_from_paper(alpha: Alpha, u0: f64, epsilon: f64) -> Result<FixedPointConfig> {
    if !(u0 > 0.0) || !u0.is_finite() {
        return Err(Error::NonPositive { name: "u0", value: u0 });
    }
    if !(epsilon > 0.0 && epsilon < u0.min(1.0)) {
        return Err(Error::EpsilonOutOfRange { epsilon, u0 });
    }
    let a = alpha.value().abs();
    let lo = u0 - epsilon;
    let hi = u0 + epsilon;
    let m_bound = a * (u0 + 2.0) / (lo * lo);
    // (f⁻¹)'(x) = (1 − x²)^{-3/2}, maximal at |x| = 1/2
    let lip_f_inv = 0.75f64.powf(-1.5);
    // |∂g/∂y| = |α||x² − y² + 2xyz| / ((x² + y²)² sqrt(1 + z²))
    // |∂g/∂z| = |α||x + yz| / ((x² + y²)(1 + z²)^{3/2})
    let dgy = a * (epsilon * epsilon + hi * hi + 2.0 * epsilon * hi * epsilon) / lo.powi(4);
    let dgz = a * (epsilon + hi * epsilon) / (lo * lo);
    let lip_g = dgy.max(dgz);
    let mut cfg = FixedPointConfig {
        epsilon,
        m_bound,
        radius: 0.0,
        lip_f_inv,
        lip_g,
        tol: 1e-12,
        max_iter: 60,
        grid_points: GRID_POINTS,
    };
    // strict inequality for the ball condition
    cfg.radius = (ball_radius_bound(m_bound, epsilon) * (1.0 - 1e-9)).min(cfg.contraction_radius_bound());
    Ok(cfg)
}

/// One application of the integral operator `T`.
pub fn picard_apply(profile: &RadialProfile, alpha: Alpha, u0: f64) -> Result<RadialProfile> {
    let n = profile.len();
    if n < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let h = profile.spacing();
    let integrand: Vec<f64> = (0..n)
        .map(|i| {
            let t = profile.grid[i];
            t * g(alpha, t, profile.u[i], profile.du[i])
        })
        .collect();
    let inner_num = cumulative_simpson(&integrand, h);
    let mut du = vec![0.0; n];
    for i in 1..n {
        let s = profile.grid[i];
        let arg = inner_num[i] / s;
        if !(arg.abs() < 1.0) {
            return Err(Error::InverseDomain { r: s, value: arg });
        }
        du[i] = f_inv(arg);
    }
    let outer = cumulative_simpson(&du, h);
    let u = outer.iter().map(|v| u0 + v).collect();
    Ok(RadialProfile { grid: profile.grid.clone(), u, du })
}

/// Convergence record of the Picard iteration.
#[derive(Debug, Clone, Serialize)]
pub struct IterationReport {
    pub iterations: usize,
    /// `‖T u − u‖_{C¹}` at the returned profile.
    pub final_defect: f64,
    /// Largest observed `‖u_{k+2} − u_{k+1}‖ / ‖u_{k+1} − u_k‖`.
    pub observed_contraction: f64,
    pub radius: f64,
    pub certified_radius: bool,
    pub lip_f_inv: f64,
    pub lip_g: f64,
}

/// Iterates `T` from the constant profile until `‖T u − u‖ ≤ tol`.
pub fn solve_singular(alpha: Alpha, u0: f64, config: &FixedPointConfig) -> Result<(RadialProfile, IterationReport)> {
    if !(config.radius > 0.0) {
        return Err(Error::NonPositive { name: "radius", value: config.radius });
    }
    let mut u = RadialProfile::constant(u0, config.radius, config.grid_points);
    let mut prev_step: Option<f64> = None;
    let mut observed: f64 = 0.0;
    // below this the step ratio only measures roundoff
    let floor = 1e3 * f64::EPSILON * (u0 + 1.0);
    for it in 1..=config.max_iter {
        let next = picard_apply(&u, alpha, u0)?;
        let step = next.c1_distance(&u);
        if let Some(p) = prev_step {
            if p > floor && step > floor {
                observed = observed.max(step / p);
            }
        }
        prev_step = Some(step);
        u = next;
        if step <= config.tol {
            let defect = picard_apply(&u, alpha, u0)?.c1_distance(&u);
            return Ok((
                u,
                IterationReport {
                    iterations: it,
                    final_defect: defect,
                    observed_contraction: observed,
                    radius: config.radius,
                    certified_radius: config.is_certified(),
                    lip_f_inv: config.lip_f_inv,
                    lip_g: config.lip_g,
                },
            ));
        }
    }
    Err(Error::NoConvergence { iterations: config.max_iter, defect: prev_step.unwrap_or(f64::NAN) })
}

/// Solves with default constants: `ε = min{1, u0}/2` and the pragmatic radius.
pub fn solve_axis(alpha: Alpha, u0: f64) -> Result<(RadialProfile, IterationReport)> {
    let cfg = bounds_from_paper(alpha, u0, default_epsilon(u0))?.pragmatic(u0);
    solve_singular(alpha, u0, &cfg)
}

/// `2·u'(r)/r` extrapolated to `r = 0` from the three smallest positive
/// radii, as a polynomial in `r²`.
pub fn regularity_limit(profile: &RadialProfile) -> Result<f64> {
    if profile.len() < 4 {
        return Err(Error::TooFewSamples { needed: 4, got: profile.len() });
    }
    let pts: Vec<(f64, f64)> = (1..4)
        .map(|i| {
            let r = profile.grid[i];
            (r * r, 2.0 * profile.du[i] / r)
        })
        .collect();
    // Lagrange interpolation at r² = 0
    let mut acc = 0.0;
    for (i, &(xi, yi)) in pts.iter().enumerate() {
        let mut w = 1.0;
        for (j, &(xj, _)) in pts.iter().enumerate() {
            if i != j {
                w *= (0.0 - xj) / (xi - xj);
            }
        }
        acc += w * yi;
    }
    Ok(acc)
}

/// Integrated-form defect `max_r |r f(u'(r)) − ∫_0^r t g dt|`.
pub fn integrated_defect(profile: &RadialProfile, alpha: Alpha) -> f64 {
    let n = profile.len();
    if n < 2 {
        return 0.0;
    }
    let integrand: Vec<f64> =
        (0..n).map(|i| profile.grid[i] * g(alpha, profile.grid[i], profile.u[i], profile.du[i])).collect();
    let cum = cumulative_simpson(&integrand, profile.spacing());
    (0..n).map(|i| (profile.grid[i] * f(profile.du[i]) - cum[i]).abs()).fold(0.0, f64::max)
}

/// Second derivative from the graph equation at `r > 0`; `α/(2u0)` at `r = 0`.
pub fn second_derivative(alpha: Alpha, r: f64, u: f64, du: f64) -> f64 {
    let w = 1.0 + du * du;
    if r == 0.0 {
        return alpha.value() / (2.0 * u);
    }
    let sw = w.sqrt();
    w * sw * (alpha.value() * (u - r * du) / ((r * r + u * u) * sw) - du / (r * sw))
}

/// Why a continuation stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ContinuationStop {
    RadiusReached,
    /// `|u'|` exceeded the graph-form limit; the curve turns vertical.
    VerticalTangent,
    /// `u` reached zero.
    HeightCollapse,
}

/// `|u'|` beyond which the graph form is abandoned.
pub const SLOPE_LIMIT: f64 = 1e3;

/// Extends a solved profile by integrating the regular graph equation from
/// its last node. The returned profile contains the original nodes followed
/// by the accepted continuation steps.
pub fn continue_profile(
    profile: &RadialProfile,
    alpha: Alpha,
    r_max: f64,
) -> Result<(RadialProfile, ContinuationStop)> {
    let n = profile.len();
    if n < 2 || profile.radius() <= 0.0 {
        return Err(Error::TooFewSamples { needed: 2, got: n });
    }
    let mut out = profile.clone();
    let r0 = profile.radius();
    if r_max <= r0 {
        return Ok((out, ContinuationStop::RadiusReached));
    }
    let y0 = [profile.u[n - 1], profile.du[n - 1]];
    let opts = Options::default();
    let mut stop = ContinuationStop::RadiusReached;
    ode::integrate(
        |r, y: &[f64; 2]| [y[1], second_derivative(alpha, r, y[0], y[1])],
        r0,
        y0,
        r_max,
        &opts,
        |st| {
            if st.y1[1].abs() > SLOPE_LIMIT {
                let r = st.locate(|_, y| y[1].abs() - SLOPE_LIMIT, 1e-12);
                let y = st.interp(r);
                out.grid.push(r);
                out.u.push(y[0]);
                out.du.push(y[1]);
                stop = ContinuationStop::VerticalTangent;
                return Control::Stop;
            }
            if st.y1[0] <= 0.0 {
                let r = st.locate(|_, y| y[0], 1e-12);
                let y = st.interp(r);
                out.grid.push(r);
                out.u.push(y[0].max(0.0));
                out.du.push(y[1]);
                stop = ContinuationStop::HeightCollapse;
                return Control::Stop;
            }
            out.grid.push(st.t1);
            out.u.push(st.y1[0]);
            out.du.push(st.y1[1]);
            Control::Continue
        },
    )?;
    Ok((out, stop))
}
