//! Classifies the axis solution in every regime and prints the evidence.

use std::time::Instant;

use stationary::classify::{classify_axis, DriverOptions, Verdict};
use stationary::Alpha;

fn main() -> stationary::Result<()> {
    let opts = DriverOptions::default();
    for a in [1.0, -1.0, -1.8, -2.0, -3.0, -4.0, -5.0] {
        let alpha = Alpha::new(a)?;
        let t0 = Instant::now();
        let (traj, r) = classify_axis(alpha, 1.0, &opts)?;
        let e = &r.evidence;
        println!(
            "alpha = {a:5}: {:?} (expected {:?}) crossings {} z in [{:.3e}, {:.3}] self-intersections {} \
             max residual {:.1e} [{:.0?}]",
            r.verdict,
            Verdict::expected_for(alpha),
            e.axis_crossings,
            e.z_range[0],
            e.z_range[1],
            e.self_intersections,
            traj.max_residual()?,
            t0.elapsed()
        );
        if let Some(why) = &r.reason {
            println!("    {why}");
        }
    }
    Ok(())
}
