//! Parallel verdict sweep over alpha, printed in alpha order. Verdicts change
//! only at the regime boundaries -4, -2 and 0.

use rayon::prelude::*;
use stationary::classify::{classify_axis, DriverOptions};
use stationary::cli::sweep_alphas;

fn main() -> stationary::Result<()> {
    let alphas = sweep_alphas(-6.0, 2.0, 0.25)?;
    let opts = DriverOptions::default();
    let reports = alphas
        .par_iter()
        .map(|&a| classify_axis(a, 1.0, &opts).map(|(_, r)| r))
        .collect::<stationary::Result<Vec<_>>>()?;
    let mut prev = None;
    for r in &reports {
        let mark = if prev.is_some_and(|p| p != r.verdict) { "  <- change" } else { "" };
        println!("{:6}: {:?}{mark}", r.alpha.value(), r.verdict);
        prev = Some(r.verdict);
    }
    Ok(())
}
