//! Minimal SVG plots: generating curves in the `(x, z)` half-plane and phase
//! portraits.

use std::fmt::Write;

use crate::phase::{Family, Portrait};

const SIZE: f64 = 640.0;
const PAD: f64 = 40.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy)]
struct Frame {
    x0: f64,
    y0: f64,
    sx: f64,
    sy: f64,
    height: f64,
}

impl Frame {
    fn new(xr: [f64; 2], yr: [f64; 2], equal: bool) -> Self {
        let span = |r: [f64; 2]| (r[1] - r[0]).max(1e-12);
        let avail = SIZE - 2.0 * PAD;
        let (mut sx, mut sy) = (avail / span(xr), avail / span(yr));
        if equal {
            let s = sx.min(sy);
            sx = s;
            sy = s;
        }
        let height = span(yr) * sy + 2.0 * PAD;
        Self { x0: xr[0], y0: yr[0], sx, sy, height }
    }

    fn width(&self, xr: [f64; 2]) -> f64 {
        (xr[1] - xr[0]).max(1e-12) * self.sx + 2.0 * PAD
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (PAD + (x - self.x0) * self.sx, self.height - PAD - (y - self.y0) * self.sy)
    }
}

fn polyline(out: &mut String, f: &Frame, pts: &[[f64; 2]], color: &str, width: f64) {
    if pts.len() < 2 {
        return;
    }
    let _ = write!(out, r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points=""#);
    for p in pts {
        let (x, y) = f.map(p[0], p[1]);
        let _ = write!(out, "{x:.2},{y:.2} ");
    }
    out.push_str("\"/>\n");
}

fn bounds(curves: &[Vec<[f64; 2]>]) -> ([f64; 2], [f64; 2]) {
    let mut xr = [0.0f64, 0.0f64];
    let mut yr = [0.0f64, 0.0f64];
    for p in curves.iter().flatten() {
        xr = [xr[0].min(p[0]), xr[1].max(p[0])];
        yr = [yr[0].min(p[1]), yr[1].max(p[1])];
    }
    let pad = 0.05 * (xr[1] - xr[0]).max(yr[1] - yr[0]).max(1e-9);
    ([xr[0] - pad, xr[1] + pad], [yr[0] - pad, yr[1] + pad])
}

/// Generating curves drawn with equal axis scaling; the origin is marked
/// and the coordinate axes drawn.
pub fn curves_svg(curves: &[Vec<[f64; 2]>], title: &str) -> String {
    let (xr, yr) = bounds(curves);
    let f = Frame::new(xr, yr, true);
    let w = f.width(xr);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{:.0}" viewBox="0 0 {w:.2} {:.2}">"#,
        f.height, f.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (ax0, ay) = f.map(xr[0], 0.0);
    let (ax1, _) = f.map(xr[1], 0.0);
    let (zx, zy0) = f.map(0.0, yr[0]);
    let (_, zy1) = f.map(0.0, yr[1]);
    let _ = writeln!(
        out,
        r##"<line x1="{ax0:.2}" y1="{ay:.2}" x2="{ax1:.2}" y2="{ay:.2}" stroke="#999" stroke-width="0.8"/>"##
    );
    let _ = writeln!(
        out,
        r##"<line x1="{zx:.2}" y1="{zy0:.2}" x2="{zx:.2}" y2="{zy1:.2}" stroke="#999" stroke-width="0.8"/>"##
    );
    for (i, c) in curves.iter().enumerate() {
        polyline(&mut out, &f, c, COLORS[i % COLORS.len()], 1.5);
    }
    let (ox, oy) = f.map(0.0, 0.0);
    let _ = writeln!(out, r#"<circle cx="{ox:.2}" cy="{oy:.2}" r="3.5" fill="black"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{PAD}" y="{:.0}" font-family="sans-serif" font-size="14">{}</text>"#,
        PAD * 0.6,
        escape(title)
    );
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Vector field arrows, separatrices and classified equilibria.
pub fn portrait_svg(p: &Portrait) -> String {
    let w = &p.window;
    let xr = [w.psi_min, w.psi_max];
    let yr = [w.theta_min, w.theta_max];
    let f = Frame::new(xr, yr, true);
    let width = f.width(xr);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{:.0}" viewBox="0 0 {width:.2} {:.2}">"#,
        f.height, f.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let cell = ((w.psi_max - w.psi_min) / crate::phase::FIELD_GRID as f64) * 0.4;
    for v in &p.field {
        let n = v[2].hypot(v[3]);
        if n == 0.0 {
            continue;
        }
        let (x0, y0) = f.map(v[0], v[1]);
        let (x1, y1) = f.map(v[0] + cell * v[2] / n, v[1] + cell * v[3] / n);
        let _ = writeln!(
            out,
            r##"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="#aaa" stroke-width="0.7"/>"##
        );
        let _ = writeln!(out, r##"<circle cx="{x1:.2}" cy="{y1:.2}" r="0.9" fill="#777"/>"##);
    }
    let _ = writeln!(
        out,
        r#"<clipPath id="win"><rect x="{PAD}" y="{PAD}" width="{:.2}" height="{:.2}"/></clipPath>"#,
        width - 2.0 * PAD,
        f.height - 2.0 * PAD
    );
    out.push_str("<g clip-path=\"url(#win)\">\n");
    for s in &p.separatrices {
        polyline(&mut out, &f, s, "#1f77b4", 1.2);
    }
    out.push_str("</g>\n");
    for e in &p.equilibria {
        let (x, y) = f.map(e.location.psi, e.location.theta);
        let color = match e.family {
            Family::P1 => "#2ca02c",
            Family::P2 => "#d62728",
            Family::P3 => "#000000",
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}"><title>{:?} {:?}</title></circle>"#,
            e.family, e.klass
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{PAD}" y="{:.0}" font-family="sans-serif" font-size="14">alpha = {} (psi horizontal, theta vertical)</text>"#,
        PAD * 0.6,
        p.alpha
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{portrait, Window};
    use crate::Alpha;

    #[test]
    fn curve_plot_is_well_formed() {
        let c: Vec<[f64; 2]> = (0..50).map(|i| [(i as f64 * 0.1).sin(), (i as f64 * 0.1).cos()]).collect();
        let s = curves_svg(&[c], "a < b");
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("<polyline") && s.contains("<circle"));
        assert!(s.contains("a &lt; b"));
    }

    #[test]
    fn portrait_plot() {
        let p = portrait(Alpha::new(1.0).unwrap(), Window::default()).unwrap();
        let s = portrait_svg(&p);
        assert_eq!(s.matches("<title>").count(), p.equilibria.len());
        assert!(s.contains("<polyline"));
    }
}
