//! Composite Simpson quadrature on uniform grids.

/// Running integral `∫_{x_0}^{x_i} f` at every node of a uniform grid with
/// spacing `h`. Even nodes use the composite Simpson chain; odd nodes add a
/// single interval integrated against the quadratic through three
/// neighbouring nodes, so they never feed back into the chain.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    for i in (2..n).step_by(2) {
        out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    }
    for i in (1..n).step_by(2) {
        let step = if i + 1 < n {
            h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1])
        } else {
            h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i])
        };
        out[i] = out[i - 1] + step;
    }
    out
}

/// Composite Simpson over the whole grid (the last node of
/// [`cumulative_simpson`]).
pub fn simpson(f: &[f64], h: f64) -> f64 {
    cumulative_simpson(f, h).last().copied().unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn exact_for_cubics() {
        let n = 11;
        let h = 0.1;
        let f: Vec<f64> = (0..n)
            .map(|i| {
                let x = i as f64 * h;
                1.0 - 2.0 * x + 3.0 * x * x * x
            })
            .collect();
        let c = cumulative_simpson(&f, h);
        for (i, v) in c.iter().enumerate() {
            let x = i as f64 * h;
            let exact = x - x * x + 0.75 * x.powi(4);
            // even nodes exact for cubics, odd nodes exact for quadratics
            let tol = if i % 2 == 0 { 1e-14 } else { 1e-4 };
            assert_abs_diff_eq!(*v, exact, epsilon = tol);
        }
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let f: Vec<f64> = (0..n).map(|i| (3.0 * i as f64 * h).sin()).collect();
            let c = cumulative_simpson(&f, h);
            c.iter().enumerate().map(|(i, v)| (v - (1.0 - (3.0 * i as f64 * h).cos()) / 3.0).abs()).fold(0.0, f64::max)
        };
        let e1 = err(33);
        let e2 = err(65);
        assert!(e1 / e2 > 12.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn tiny_grids() {
        assert_eq!(cumulative_simpson(&[], 1.0), Vec::<f64>::new());
        assert_eq!(cumulative_simpson(&[2.0], 1.0), vec![0.0]);
        assert_eq!(cumulative_simpson(&[1.0, 3.0], 0.5), vec![0.0, 1.0]);
        assert_abs_diff_eq!(simpson(&[0.0, 1.0, 4.0], 1.0), 8.0 / 3.0);
    }
}
