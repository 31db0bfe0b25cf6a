//! Equilibrium table of the autonomous (psi, theta) system and the fate of
//! the unstable manifold of the saddle P3, plus a portrait SVG per regime.

use std::path::PathBuf;

use stationary::phase::{portrait, predicted_limit, regime_table, unstable_manifold, Window};
use stationary::{io, svg, Alpha};

fn main() -> stationary::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "phase".into()));
    for a in [1.0, -1.0, -2.0, -3.0, -4.0, -5.0] {
        let alpha = Alpha::new(a)?;
        let t = regime_table(alpha);
        let m = unstable_manifold(alpha, 1.0)?;
        let end = m.last();
        let target = predicted_limit(alpha)
            .map(|p| format!("({:+.4}, {:+.4}), distance {:.1e}", p.psi, p.theta, p.distance(&end)))
            .unwrap_or_else(|| "none".into());
        println!(
            "alpha = {a:4}: P1 {:?}, P2 {:?}, P3 {:?}; manifold ends at ({:+.4}, {:+.4}), predicted {target}",
            t.p1, t.p2, t.p3, end.psi, end.theta
        );
        let p = portrait(alpha, Window::default())?;
        io::write_string(&dir.join(format!("portrait_alpha{a}.svg")), &svg::portrait_svg(&p))?;
    }
    println!("wrote portraits to {}", dir.display());
    Ok(())
}
