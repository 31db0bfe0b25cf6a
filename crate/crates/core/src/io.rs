//! CSV and JSON writers. Numbers are written with Rust's shortest
//! round-trip formatting, so output is full precision and locale-free.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use crate::arclength::Trajectory;
use crate::singular::RadialProfile;
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, mut w: W) -> Result<()> {
    writeln!(w, "s,x,z,psi")?;
    for c in &traj.samples {
        writeln!(w, "{},{},{},{}", c.s, c.x, c.z, c.psi)?;
    }
    Ok(())
}

pub fn write_profile_csv<W: Write>(profile: &RadialProfile, mut w: W) -> Result<()> {
    writeln!(w, "r,u,du")?;
    for i in 0..profile.len() {
        writeln!(w, "{},{},{}", profile.grid[i], profile.u[i], profile.du[i])?;
    }
    Ok(())
}

/// `{schema, alpha, mode, scale, events: [{kind, s}]}`.
pub fn events_json(traj: &Trajectory) -> serde_json::Value {
    json!({
        "schema": SCHEMA_VERSION,
        "alpha": traj.alpha,
        "mode": traj.init.mode,
        "scale": traj.init.scale,
        "events": traj.events,
    })
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_string(path: &Path, s: &str) -> Result<()> {
    let mut w = create(path)?;
    w.write_all(s.as_bytes())?;
    w.flush()?;
    Ok(())
}

/// `traj.csv` beside `traj.events.json`.
pub fn sidecar_path(csv: &Path) -> std::path::PathBuf {
    csv.with_extension("events.json")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arclength::{integrate, InitialData};
    use crate::Alpha;

    #[test]
    fn csv_round_trips() {
        let t = integrate(InitialData::axis(1.0).unwrap(), Alpha::new(-2.0).unwrap(), 1.0).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("s,x,z,psi"));
        for (line, c) in lines.zip(&t.samples) {
            let v: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
            assert_eq!(v, vec![c.s, c.x, c.z, c.psi]);
        }
    }

    #[test]
    fn events_have_schema() {
        let t = integrate(InitialData::axis(1.0).unwrap(), Alpha::new(-2.0).unwrap(), 50.0).unwrap();
        let v = events_json(&t);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["events"].as_array().unwrap().last().unwrap()["kind"], "AXIS_RETURN");
        assert_eq!(sidecar_path(Path::new("out/a.csv")), Path::new("out/a.events.json"));
    }
}
