//! Integrates axis and plane generating curves for a handful of alphas and
//! writes one SVG per family.
//!
//! `cargo run --release --example generating_curves -- out_dir`

use std::path::PathBuf;

use stationary::arclength::{integrate, InitialData};
use stationary::{io, svg, Alpha};

fn main() -> stationary::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "curves".into()));
    let families: [(&str, &[f64]); 3] = [
        ("positive", &[0.5, 1.0, 2.0, 4.0]),
        ("between_minus_two_and_zero", &[-0.5, -1.0, -1.8]),
        ("below_minus_two", &[-2.0, -3.0, -4.0, -5.0]),
    ];
    for (name, alphas) in families {
        let mut curves = Vec::new();
        for &a in alphas {
            let t = integrate(InitialData::axis(1.0)?, Alpha::new(a)?, 30.0)?;
            println!(
                "alpha = {a:5}: {:6} samples, ends by {:?} at s = {:.4}, max residual {:.1e}",
                t.samples.len(),
                t.terminal_event().map(|e| e.kind),
                t.last().s,
                t.max_residual()?
            );
            curves.push(t.samples.iter().map(|c| [c.x, c.z]).collect());
        }
        io::write_string(&dir.join(format!("{name}.svg")), &svg::curves_svg(&curves, name))?;
    }

    // curves leaving the plane z = 0 orthogonally
    let mut curves = Vec::new();
    for a in [1.0, -1.0, -3.0, -5.0] {
        let t = integrate(InitialData::plane(1.0)?, Alpha::new(a)?, 20.0)?;
        curves.push(t.samples.iter().map(|c| [c.x, c.z]).collect());
    }
    io::write_string(&dir.join("plane.svg"), &svg::curves_svg(&curves, "plane data"))?;
    println!("wrote SVGs to {}", dir.display());
    Ok(())
}
