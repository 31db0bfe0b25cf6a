//! Solves the radial problem near the axis by Picard iteration and checks
//! the regularity condition `2u'(r)/r -> alpha/u0` at the origin.

use stationary::singular::{bounds_from_paper, regularity_limit, solve_axis, solve_singular};
use stationary::Alpha;

fn main() -> stationary::Result<()> {
    let alpha = Alpha::new(1.0)?;
    let cfg = bounds_from_paper(alpha, 1.0, 0.5)?;
    println!(
        "alpha = 1, u0 = 1, eps = 1/2: M = {}, certified radius {:.5}, L_f = {:.4}, L_g = {:.4}",
        cfg.m_bound, cfg.radius, cfg.lip_f_inv, cfg.lip_g
    );
    let (profile, report) = solve_singular(alpha, 1.0, &cfg)?;
    println!(
        "  {} iterations, observed contraction {:.3e}, defect {:.1e}",
        report.iterations, report.observed_contraction, report.final_defect
    );
    println!("  u(R) = {:.12}", profile.u.last().unwrap());

    for (a, u0) in [(1.0, 1.0), (-2.0, 1.0), (-3.0, 2.0), (-4.0, 1.0)] {
        let alpha = Alpha::new(a)?;
        let (p, rep) = solve_axis(alpha, u0)?;
        let lim = regularity_limit(&p)?;
        println!(
            "alpha = {a:5}, u0 = {u0}: R = {:.4} (certified: {}), 2u'/r -> {lim:.10} (alpha/u0 = {})",
            rep.radius,
            rep.certified_radius,
            a / u0
        );
    }
    Ok(())
}
