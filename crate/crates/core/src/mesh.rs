//! Triangulated surfaces of revolution `(x cos t, x sin t, z)`.

use std::collections::HashSet;
use std::f64::consts::TAU;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::arclength::{CurveState, EventKind, Trajectory};
use crate::geometry::{stationary_residual, Alpha, Point3};
use crate::{Error, Result};

pub const MIN_SEGMENTS: usize = 8;

/// Generator samples with `x` at or below this fraction of the scale are
/// treated as lying on the axis.
const AXIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct RevolvedMesh {
    pub vertices: Vec<Point3>,
    pub normals: Vec<Point3>,
    pub triangles: Vec<[usize; 3]>,
    pub angular_segments: usize,
    /// Generator samples used, in order; rings and apexes come from these.
    pub generator: Vec<CurveState>,
    pub alpha: Alpha,
    /// Index of the first vertex of each ring (or the apex vertex).
    pub ring_start: Vec<usize>,
    /// Whether each generator entry became a single apex vertex.
    pub is_apex: Vec<bool>,
    /// A closing apex added where the generator ends at the axis or origin.
    pub closing_apex: Option<Point3>,
}

fn ring_normal(c: &CurveState, t: f64) -> Point3 {
    let (st, ct) = t.sin_cos();
    let sp = c.psi.sin();
    Point3::new(-sp * ct, -sp * st, c.psi.cos())
}

/// Picks at most `max_rings` generator samples, evenly spread by index,
/// always keeping both ends.
pub fn thin_generator(samples: &[CurveState], max_rings: usize) -> Vec<CurveState> {
    let n = samples.len();
    if n <= max_rings || max_rings < 2 {
        return samples.to_vec();
    }
    let mut out: Vec<CurveState> = (0..max_rings).map(|i| samples[(i * (n - 1)) / (max_rings - 1)]).collect();
    out.dedup_by(|b, a| b.s == a.s);
    out
}

/// Revolves every sample of the trajectory.
pub fn revolve(traj: &Trajectory, segments: usize) -> Result<RevolvedMesh> {
    revolve_samples(traj, &traj.samples, segments)
}

/// Revolves at most `max_rings` samples of the trajectory.
pub fn revolve_thinned(traj: &Trajectory, segments: usize, max_rings: usize) -> Result<RevolvedMesh> {
    revolve_samples(traj, &thin_generator(&traj.samples, max_rings), segments)
}

fn revolve_samples(traj: &Trajectory, samples: &[CurveState], segments: usize) -> Result<RevolvedMesh> {
    if segments < MIN_SEGMENTS {
        return Err(Error::Invalid(format!("need at least {MIN_SEGMENTS} angular segments, got {segments}")));
    }
    if samples.len() < 2 {
        return Err(Error::TooFewSamples { needed: 2, got: samples.len() });
    }
    let axis_tol = AXIS_TOL * traj.init.scale;
    let mut vertices = Vec::new();
    let mut normals = Vec::new();
    let mut ring_start = Vec::with_capacity(samples.len());
    let mut is_apex = Vec::with_capacity(samples.len());
    for (i, c) in samples.iter().enumerate() {
        let on_axis = c.x <= axis_tol;
        let interior = i > 0 && i + 1 < samples.len();
        if c.x < 0.0 || (on_axis && interior) {
            return Err(Error::NonPositiveRadius { s: c.s, x: c.x });
        }
        ring_start.push(vertices.len());
        is_apex.push(on_axis);
        if on_axis {
            vertices.push(Point3::new(0.0, 0.0, c.z));
            normals.push(ring_normal(c, 0.0));
        } else {
            for j in 0..segments {
                let t = TAU * j as f64 / segments as f64;
                vertices.push(Point3::new(c.x * t.cos(), c.x * t.sin(), c.z));
                normals.push(ring_normal(c, t));
            }
        }
    }

    let mut triangles = Vec::new();
    for i in 0..samples.len() - 1 {
        let (a, b) = (ring_start[i], ring_start[i + 1]);
        match (is_apex[i], is_apex[i + 1]) {
            (true, true) => {}
            (true, false) => {
                for j in 0..segments {
                    triangles.push([a, b + j, b + (j + 1) % segments]);
                }
            }
            (false, true) => {
                for j in 0..segments {
                    triangles.push([a + j, b, a + (j + 1) % segments]);
                }
            }
            (false, false) => {
                for j in 0..segments {
                    let k = (j + 1) % segments;
                    triangles.push([a + j, b + j, b + k]);
                    triangles.push([a + j, b + k, a + k]);
                }
            }
        }
    }

    // close generators that end at the origin or return to the axis
    let last = samples.last().unwrap();
    let closing_apex = if *is_apex.last().unwrap() {
        None
    } else {
        match traj.terminal_event().map(|e| e.kind) {
            Some(EventKind::OriginApproach) if last.s == traj.last().s => Some(Point3::zeros()),
            Some(EventKind::AxisReturn) if last.s == traj.last().s => Some(Point3::new(0.0, 0.0, last.z)),
            _ => None,
        }
    };
    if let Some(p) = closing_apex {
        let a = *ring_start.last().unwrap();
        let apex = vertices.len();
        let mean: Point3 = normals[a..a + segments].iter().sum();
        vertices.push(p);
        normals.push(mean.try_normalize(1e-12).unwrap_or_else(|| Point3::new(0.0, 0.0, last.psi.cos().signum())));
        for j in 0..segments {
            triangles.push([a + j, apex, a + (j + 1) % segments]);
        }
    }

    Ok(RevolvedMesh {
        vertices,
        normals,
        triangles,
        angular_segments: segments,
        generator: samples.to_vec(),
        alpha: traj.alpha,
        ring_start,
        is_apex,
        closing_apex,
    })
}

impl RevolvedMesh {
    /// `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        let mut edges = HashSet::new();
        for t in &self.triangles {
            for (p, q) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                edges.insert((p.min(q), p.max(q)));
            }
        }
        self.vertices.len() as i64 - edges.len() as i64 + self.triangles.len() as i64
    }

    /// Vertex index after rotating by `2π/segments` about the z-axis.
    pub fn rotated_index(&self, v: usize) -> usize {
        if self.closing_apex.is_some() && v + 1 == self.vertices.len() {
            return v;
        }
        let ring = self.ring_start.partition_point(|&s| s <= v) - 1;
        let base = self.ring_start[ring];
        if !self.is_apex[ring] {
            base + (v - base + 1) % self.angular_segments
        } else {
            v
        }
    }

    /// Writes Wavefront OBJ with vertices and normals to 17 significant digits.
    pub fn write_obj<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# surface of revolution, alpha = {}", self.alpha)?;
        writeln!(w, "# {} vertices, {} triangles", self.vertices.len(), self.triangles.len())?;
        for v in &self.vertices {
            writeln!(w, "v {:.16e} {:.16e} {:.16e}", v.x, v.y, v.z)?;
        }
        for n in &self.normals {
            writeln!(w, "vn {:.16e} {:.16e} {:.16e}", n.x, n.y, n.z)?;
        }
        for t in &self.triangles {
            let (a, b, c) = (t[0] + 1, t[1] + 1, t[2] + 1);
            writeln!(w, "f {a}//{a} {b}//{b} {c}//{c}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
    pub samples: usize,
}

/// Residual of the stationary equation from the generator's analytic
/// curvatures `κ₁ = ψ'`, `κ₂ = sin ψ / x`. The residual does not depend on
/// the rotation angle, so one evaluation per generator sample suffices.
pub fn mesh_residual_stats(mesh: &RevolvedMesh, alpha: Alpha) -> Result<ResidualStats> {
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    let mut n = 0;
    for c in &mesh.generator {
        if !c.dpsi.is_finite() {
            return Err(Error::MissingDerivative("generator sample has no finite psi'"));
        }
        let r = stationary_residual(&c.surface_sample(0.0)?, alpha)?.abs();
        max = max.max(r);
        sum += r;
        n += 1;
    }
    Ok(ResidualStats { max, mean: sum / n as f64, samples: n })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arclength::{integrate, InitialData};

    fn a(v: f64) -> Alpha {
        Alpha::new(v).unwrap()
    }

    #[test]
    fn sphere_meshes() {
        let t = integrate(InitialData::axis(1.0).unwrap(), a(-2.0), 50.0).unwrap();
        let m = revolve_thinned(&t, 32, 200).unwrap();
        assert!(m.vertices.iter().all(|v| (v.norm() - 1.0).abs() < 1e-8));
        assert_eq!(m.euler_characteristic(), 2);
        assert!(mesh_residual_stats(&m, a(-2.0)).unwrap().max < 1e-7);

        let t = integrate(InitialData::axis(1.0).unwrap(), a(-4.0), 50.0).unwrap();
        let m = revolve_thinned(&t, 16, 200).unwrap();
        let c = Point3::new(0.0, 0.0, 0.5);
        assert!(m.vertices.iter().all(|v| ((v - c).norm() - 0.5).abs() < 1e-8));
        assert_eq!(m.euler_characteristic(), 2);
    }

    #[test]
    fn counting() {
        let t = integrate(InitialData::axis(1.0).unwrap(), a(1.0), 1.0).unwrap();
        let gen = vec![t.samples[0], t.samples[10], t.samples[20]];
        let m = revolve_samples(&t, &gen, 8).unwrap();
        // apex fan (8) + one band between two rings (16)
        assert_eq!(m.triangles.len(), 24);
        assert_eq!(m.vertices.len(), 1 + 2 * 8);
        assert_eq!(m.euler_characteristic(), 1);
        assert!(revolve(&t, 7).is_err());
    }

    #[test]
    fn rotation_permutes_vertices() {
        let t = integrate(InitialData::axis(1.0).unwrap(), a(1.0), 2.0).unwrap();
        let m = revolve_thinned(&t, 12, 30).unwrap();
        let (s, c) = (TAU / 12.0).sin_cos();
        for (i, v) in m.vertices.iter().enumerate() {
            let r = Point3::new(c * v.x - s * v.y, s * v.x + c * v.y, v.z);
            assert!((r - m.vertices[m.rotated_index(i)]).norm() < 1e-12);
        }
    }

    #[test]
    fn negative_control() {
        let t = integrate(InitialData::axis(1.0).unwrap(), a(1.0), 5.0).unwrap();
        let mut m = revolve_thinned(&t, 8, 100).unwrap();
        assert!(mesh_residual_stats(&m, a(1.0)).unwrap().max < 1e-7);
        for c in &mut m.generator {
            c.z += 0.01;
        }
        assert!(mesh_residual_stats(&m, a(1.0)).unwrap().max > 1e-3);
        m.generator[3].dpsi = f64::NAN;
        assert!(matches!(mesh_residual_stats(&m, a(1.0)), Err(Error::MissingDerivative(_))));
    }

    #[test]
    fn obj_output() {
        let t = integrate(InitialData::axis(1.0).unwrap(), a(-2.0), 50.0).unwrap();
        let m = revolve_thinned(&t, 8, 10).unwrap();
        let mut buf = Vec::new();
        m.write_obj(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.lines().filter(|l| l.starts_with("v ")).count(), m.vertices.len());
        assert_eq!(s.lines().filter(|l| l.starts_with("f ")).count(), m.triangles.len());
        let first = s.lines().find(|l| l.starts_with("v ")).unwrap();
        let z: f64 = first.split_whitespace().nth(3).unwrap().parse().unwrap();
        assert_eq!(z, m.vertices[0].z);
    }
}
