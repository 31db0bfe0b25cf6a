//! Oracles shared by the integration tests and the acceptance target.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use stationary::phase::{nearest_equilibrium, rhs_phase, PhaseProjection, PhaseState, ALIGN_FLOOR};
use stationary::singular::{uniform_grid, RadialProfile, GRID_POINTS};
use stationary::Alpha;

/// A random profile `u0 + w(r)` with `‖w‖_{C¹} < ε`, `w` a random mix of
/// polynomial and trigonometric terms scaled into the ball.
pub fn random_profile(rng: &mut StdRng, u0: f64, eps: f64, radius: f64) -> RadialProfile {
    let grid = uniform_grid(radius, GRID_POINTS);
    let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
    let k: f64 = rng.gen_range(1.0..6.0);
    let w = |r: f64| {
        let x = r / radius;
        let u = c[0] + c[1] * x * x + c[2] * (k * x).sin() + c[3] * x.powi(3);
        let du = (2.0 * c[1] * x + c[2] * k * (k * x).cos() + 3.0 * c[3] * x * x) / radius;
        (u, du)
    };
    let raw: Vec<(f64, f64)> = grid.iter().map(|&r| w(r)).collect();
    let norm = raw.iter().map(|p| p.0.abs()).fold(0.0, f64::max) + raw.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    let scale = rng.gen_range(0.05..0.99) * eps / norm;
    RadialProfile {
        u: raw.iter().map(|p| u0 + scale * p.0).collect(),
        du: raw.iter().map(|p| scale * p.1).collect(),
        grid,
    }
}

/// Indices `i` whose neighbours `i−k..=i+k` are equally spaced in `s`.
pub fn uniform_windows(s: &[f64], k: usize) -> impl Iterator<Item = usize> + '_ {
    (k..s.len().saturating_sub(k)).filter(move |&i| {
        let h = s[i + 1] - s[i];
        h > 0.0 && (i - k..i + k).all(|j| ((s[j + 1] - s[j]) - h).abs() <= 1e-9 * h)
    })
}

/// Worst angle between five-point differences of the stored `(ψ, θ)` and
/// the phase field, skipping points within `exclusion` of an equilibrium.
/// Independent of the stored `ψ'` and of the closed-form `θ'`.
pub fn five_point_misalignment(p: &PhaseProjection, alpha: Alpha, exclusion: f64) -> (f64, usize) {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for i in uniform_windows(&p.s, 2) {
        let state = p.state(i);
        if state.distance(&nearest_equilibrium(&state).0) < exclusion {
            continue;
        }
        let h = p.s[i + 1] - p.s[i];
        let d5 = |v: &[f64]| (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);
        let tangent = [d5(&p.psi), d5(&p.theta)];
        let field = rhs_phase(&PhaseState::new(p.psi[i], p.theta[i]), alpha);
        if field[0].hypot(field[1]) <= ALIGN_FLOOR {
            continue;
        }
        let cross = tangent[0] * field[1] - tangent[1] * field[0];
        let dot = tangent[0] * field[0] + tangent[1] * field[1];
        worst = worst.max(cross.atan2(dot).abs());
        checked += 1;
    }
    (worst, checked)
}
