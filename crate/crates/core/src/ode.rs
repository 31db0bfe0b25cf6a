//! Dormand–Prince 5(4) with Hairer's 4th-order continuous extension.
//!
//! The driver hands every accepted step to an observer, which can sample the
//! dense interpolant, locate sign changes and stop the integration. Right-hand
//! sides may return non-finite values near singular sets; such steps are
//! rejected and retried with a smaller step.

use crate::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    /// Initial step; `None` selects one automatically.
    pub h_init: Option<f64>,
    pub h_max: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, h_init: None, h_max: f64::INFINITY, h_min: 1e-14, max_steps: 2_000_000 }
    }
}

/// One accepted step with its dense interpolant.
#[derive(Debug, Clone)]
pub struct Step<const N: usize> {
    pub t0: f64,
    pub t1: f64,
    pub y0: [f64; N],
    pub y1: [f64; N],
    /// Derivative at `t1` (first stage of the next step).
    pub f1: [f64; N],
    cont: [[f64; N]; 5],
}

impl<const N: usize> Step<N> {
    /// Dense output at `t ∈ [t0, t1]`.
    pub fn interp(&self, t: f64) -> [f64; N] {
        let h = self.t1 - self.t0;
        let th = if h == 0.0 { 1.0 } else { (t - self.t0) / h };
        let th1 = 1.0 - th;
        let c = &self.cont;
        std::array::from_fn(|i| c[0][i] + th * (c[1][i] + th1 * (c[2][i] + th * (c[3][i] + th1 * c[4][i]))))
    }

    /// Finds `t` where `g` changes sign on the step by bisection on the
    /// interpolant. `g0` and `g1` must have opposite signs (or `g1 == 0`).
    pub fn locate<G: Fn(f64, &[f64; N]) -> f64>(&self, g: G, tol: f64) -> f64 {
        let mut lo = self.t0;
        let mut hi = self.t1;
        let mut glo = g(lo, &self.y0);
        if g(hi, &self.y1) == 0.0 {
            return hi;
        }
        for _ in 0..200 {
            let span = hi - lo;
            if span <= tol.max(4.0 * f64::EPSILON * hi.abs()) {
                break;
            }
            let mid = lo + 0.5 * span;
            let gm = g(mid, &self.interp(mid));
            if gm == 0.0 {
                return mid;
            }
            if (gm > 0.0) == (glo > 0.0) {
                lo = mid;
                glo = gm;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Observer decision after an accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Control {
    Continue,
    Stop,
}

/// Result of a completed integration.
#[derive(Debug, Clone)]
pub struct Outcome<const N: usize> {
    pub t: f64,
    pub y: [f64; N],
    pub accepted: usize,
    pub rejected: usize,
    pub stopped: bool,
}

fn finite<const N: usize>(v: &[f64; N]) -> bool {
    v.iter().all(|x| x.is_finite())
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

fn error_norm<const N: usize>(err: &[f64; N], y0: &[f64; N], y1: &[f64; N], o: &Options) -> f64 {
    let s: f64 = (0..N)
        .map(|i| {
            let sc = o.atol + o.rtol * y0[i].abs().max(y1[i].abs());
            (err[i] / sc).powi(2)
        })
        .sum();
    (s / N as f64).sqrt()
}

/// Integrates `y' = f(t, y)` from `t0` toward `t_end` (either direction).
pub fn integrate<const N: usize, F, O>(
    mut f: F,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &Options,
    mut observer: O,
) -> Result<Outcome<N>>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
    O: FnMut(&Step<N>) -> Control,
{
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let span = (t_end - t0).abs();
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    if !finite(&k1) {
        return Err(Error::Singular { x: f64::NAN });
    }
    if span == 0.0 {
        return Ok(Outcome { t, y, accepted: 0, rejected: 0, stopped: false });
    }
    let mut h = match opts.h_init {
        Some(h) => h.abs().min(span),
        None => initial_step(&mut f, t, &y, &k1, dir, opts).min(span),
    }
    .min(opts.h_max);
    let mut accepted = 0;
    let mut rejected = 0;
    let mut last_rejected = false;

    loop {
        if accepted + rejected >= opts.max_steps {
            return Err(Error::TooManySteps(opts.max_steps));
        }
        let remaining = (t_end - t) * dir;
        let mut last = false;
        if h >= remaining {
            h = remaining;
            last = true;
        }
        if h < opts.h_min * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t, h });
        }
        let hs = h * dir;
        let k2 = f(t + C2 * hs, &axpy(&y, hs, &[(A21, &k1)]));
        let k3 = f(t + C3 * hs, &axpy(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * hs, &axpy(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * hs, &axpy(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let y6 = axpy(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]);
        let k6 = f(t + hs, &y6);
        let y1 = axpy(&y, hs, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + hs, &y1);

        let ok_values =
            finite(&k2) && finite(&k3) && finite(&k4) && finite(&k5) && finite(&k6) && finite(&k7) && finite(&y1);
        let err_est: [f64; N] =
            std::array::from_fn(|i| hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]));
        let err = if ok_values { error_norm(&err_est, &y, &y1, opts) } else { f64::INFINITY };

        if err <= 1.0 {
            let t1 = if last { t_end } else { t + hs };
            let r2: [f64; N] = std::array::from_fn(|i| y1[i] - y[i]);
            let r3: [f64; N] = std::array::from_fn(|i| hs * k1[i] - r2[i]);
            let r4: [f64; N] = std::array::from_fn(|i| r2[i] - hs * k7[i] - r3[i]);
            let r5: [f64; N] = std::array::from_fn(|i| {
                hs * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            let step = Step { t0: t, t1, y0: y, y1, f1: k7, cont: [y, r2, r3, r4, r5] };
            accepted += 1;
            t = t1;
            y = y1;
            k1 = k7;
            if observer(&step) == Control::Stop {
                return Ok(Outcome { t, y, accepted, rejected, stopped: true });
            }
            if last {
                return Ok(Outcome { t, y, accepted, rejected, stopped: false });
            }
            let mut fac = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
            fac = fac.clamp(0.2, 5.0);
            if last_rejected {
                fac = fac.min(1.0);
            }
            h = (h * fac).min(opts.h_max);
            last_rejected = false;
        } else {
            rejected += 1;
            let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.25 };
            h *= fac;
            last_rejected = true;
        }
    }
}

fn initial_step<const N: usize, F>(f: &mut F, t: f64, y: &[f64; N], f0: &[f64; N], dir: f64, o: &Options) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let sc: [f64; N] = std::array::from_fn(|i| o.atol + o.rtol * y[i].abs());
    let rms = |v: &[f64; N]| ((0..N).map(|i| (v[i] / sc[i]).powi(2)).sum::<f64>() / N as f64).sqrt();
    let d0 = rms(y);
    let d1 = rms(f0);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1: [f64; N] = std::array::from_fn(|i| y[i] + dir * h0 * f0[i]);
    let f1 = f(t + dir * h0, &y1);
    let diff: [f64; N] = std::array::from_fn(|i| f1[i] - f0[i]);
    let d2 = rms(&diff) / h0;
    let h1 = if d1.max(d2) <= 1e-15 { (h0 * 1e-3).max(1e-6) } else { (0.01 / d1.max(d2)).powf(0.2) };
    let h = (100.0 * h0).min(h1);
    if h.is_finite() {
        h
    } else {
        1e-6
    }
}
