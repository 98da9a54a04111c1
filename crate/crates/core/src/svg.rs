//! SVG rendering of a placed window. Floating point appears only here.

use std::fmt::Write;

use crate::arith::QuadFieldElem;
use crate::realization::PlacedCrystal;

#[derive(Clone, Copy, Debug, Default)]
pub struct SvgOptions {
    /// Draw the period lattice basis as arrows from the origin.
    pub show_lattice: bool,
}

/// `x` with 12 significant digits, trailing zeros trimmed.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    let prec = (11 - mag).max(0) as usize;
    let mut s = format!("{x:.prec$}");
    if s.contains('.') {
        s = s.trim_end_matches('0').trim_end_matches('.').to_string();
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Screen coordinates: real part right, imaginary part up.
fn xy(z: &QuadFieldElem) -> (f64, f64) {
    let (x, y) = z.to_f64_pair();
    (x, -y)
}

pub fn render(pc: &PlacedCrystal, opts: SvgOptions) -> String {
    let mut pts: Vec<(f64, f64)> = pc.vertices.iter().map(|v| xy(&v.position)).collect();
    for s in &pc.segments {
        pts.push(xy(&s.start));
        pts.push(xy(&s.end));
    }
    if opts.show_lattice {
        pts.push((0.0, 0.0));
        pts.push(xy(&pc.lattice.w1));
        pts.push(xy(&pc.lattice.w2));
    }
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let margin = 0.05 * span;
    let (vx, vy, vw, vh) = (x0 - margin, y0 - margin, x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let stroke = span / 300.0;
    let radius = span / 120.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        fmt_num(vx),
        fmt_num(vy),
        fmt_num(vw),
        fmt_num(vh)
    );
    let _ = writeln!(out, r##"<g stroke="#222" stroke-width="{}" stroke-linecap="round">"##, fmt_num(stroke));
    for s in &pc.segments {
        let (a, b) = (xy(&s.start), xy(&s.end));
        let _ = writeln!(
            out,
            r#"<line data-edge="{}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            s.edge,
            fmt_num(a.0),
            fmt_num(a.1),
            fmt_num(b.0),
            fmt_num(b.1)
        );
    }
    out.push_str("</g>\n");
    out.push_str("<g fill=\"#c33\">\n");
    for v in &pc.vertices {
        let (x, y) = xy(&v.position);
        let _ =
            writeln!(out, r#"<circle data-vertex="{}" cx="{}" cy="{}" r="{}"/>"#, v.id, fmt_num(x), fmt_num(y), fmt_num(radius));
    }
    out.push_str("</g>\n");
    if opts.show_lattice {
        let head = 4.0 * stroke;
        let _ = writeln!(
            out,
            r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="{0}" markerHeight="{0}" markerUnits="userSpaceOnUse" orient="auto"><path d="M0 0L10 5L0 10z" fill="#36c"/></marker></defs>"##,
            fmt_num(head)
        );
        let _ = writeln!(out, r##"<g stroke="#36c" stroke-width="{}" marker-end="url(#arrow)">"##, fmt_num(1.5 * stroke));
        for (name, w) in [("w1", &pc.lattice.w1), ("w2", &pc.lattice.w2)] {
            let (x, y) = xy(w);
            let _ = writeln!(out, r#"<line data-lattice="{name}" x1="0" y1="0" x2="{}" y2="{}"/>"#, fmt_num(x), fmt_num(y));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
