//! Revolves axis solutions into OBJ meshes and reports the residual of the
//! stationary equation on the generator.

use std::io::Write;
use std::path::PathBuf;

use stationary::arclength::{integrate, InitialData};
use stationary::mesh::{mesh_residual_stats, revolve_thinned};
use stationary::{io, Alpha};

fn main() -> stationary::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "meshes".into()));
    for a in [-2.0, -4.0, -5.0, 1.0] {
        let alpha = Alpha::new(a)?;
        let traj = integrate(InitialData::axis(1.0)?, alpha, 10.0)?;
        let mesh = revolve_thinned(&traj, 48, 300)?;
        let stats = mesh_residual_stats(&mesh, alpha)?;
        let path = dir.join(format!("alpha{a}.obj"));
        let mut w = io::create(&path)?;
        mesh.write_obj(&mut w)?;
        w.flush()?;
        println!(
            "{}: {} vertices, {} triangles, chi = {}, residual max {:.1e}",
            path.display(),
            mesh.vertices.len(),
            mesh.triangles.len(),
            mesh.euler_characteristic(),
            stats.max
        );
    }
    Ok(())
}
