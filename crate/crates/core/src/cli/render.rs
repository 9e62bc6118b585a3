//! Static figures of diagrams and certificates: a dot grid, filled diagram
//! points and the cut lines of every cut node.

use std::fmt::Write;

use crate::cutting::CutCertificate;
use crate::diagram::{AffineCut, Diagram, LatticePoint};

/// Lattice pitch in SVG units.
pub const PITCH: f64 = 6.0;
const MARGIN: f64 = 8.0;

/// Cut lines of `cert` in the root's coordinates, in depth-first order.
pub fn collect_cuts(cert: &CutCertificate) -> Vec<AffineCut> {
    fn walk(c: &CutCertificate, offset: (i64, i64), out: &mut Vec<AffineCut>) {
        match c {
            CutCertificate::CutNode { cut, sub2, sub1, .. } => {
                out.push(cut.shifted(offset));
                walk(sub2, offset, out);
                walk(sub1, offset, out);
            }
            CutCertificate::EquivLeaf { translation, inner, .. } => {
                walk(inner, (offset.0 + translation.0, offset.1 + translation.1), out)
            }
            CutCertificate::Monotone { inner, .. } => walk(inner, offset, out),
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(cert, (0, 0), &mut out);
    out
}

fn extent(d: &Diagram) -> (u32, u32) {
    (d.max_x().unwrap_or(0) + 1, d.max_y().unwrap_or(0) + 1)
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

/// Endpoints of `F = 0` inside the box `[x0, x1] × [y0, y1]`, if the line meets it.
fn clip(cut: &AffineCut, x0: f64, y0: f64, x1: f64, y1: f64) -> Option<((f64, f64), (f64, f64))> {
    let a = cut.evaluate(1.0, 0.0) - cut.evaluate(0.0, 0.0);
    let b = cut.evaluate(0.0, 1.0) - cut.evaluate(0.0, 0.0);
    let c = cut.evaluate(0.0, 0.0);
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let eps = 1e-9;
    if b.abs() > eps {
        for x in [x0, x1] {
            let y = -(a * x + c) / b;
            if y >= y0 - eps && y <= y1 + eps {
                pts.push((x, y));
            }
        }
    }
    if a.abs() > eps {
        for y in [y0, y1] {
            let x = -(b * y + c) / a;
            if x >= x0 - eps && x <= x1 + eps {
                pts.push((x, y));
            }
        }
    }
    pts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    pts.dedup_by(|p, q| (p.0 - q.0).abs() < eps && (p.1 - q.1).abs() < eps);
    match (pts.first(), pts.last()) {
        (Some(&p), Some(&q)) if pts.len() >= 2 => Some((p, q)),
        _ => None,
    }
}

pub fn svg(diagram: &Diagram, cuts: &[AffineCut]) -> String {
    let (w, h) = extent(diagram);
    let width = 2.0 * MARGIN + PITCH * w as f64;
    let height = 2.0 * MARGIN + PITCH * h as f64;
    let sx = |x: f64| MARGIN + PITCH * x;
    let sy = |y: f64| height - MARGIN - PITCH * y;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        num(width),
        num(height),
        num(width),
        num(height)
    )
    .unwrap();
    writeln!(out, r#"<g stroke="black" stroke-width="0.5">"#).unwrap();
    writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        num(sx(-0.5)),
        num(sy(0.0)),
        num(sx(w as f64)),
        num(sy(0.0))
    )
    .unwrap();
    writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
        num(sx(0.0)),
        num(sy(-0.5)),
        num(sx(0.0)),
        num(sy(h as f64))
    )
    .unwrap();
    writeln!(out, "</g>").unwrap();
    writeln!(out, r#"<g fill="black">"#).unwrap();
    if !diagram.is_empty() {
        for y in 0..h {
            for x in 0..w {
                writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="0.2"/>"#,
                    num(sx(x as f64)),
                    num(sy(y as f64))
                )
                .unwrap();
            }
        }
    }
    for p in diagram.iter() {
        writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="1.2"/>"#,
            num(sx(p.x as f64)),
            num(sy(p.y as f64))
        )
        .unwrap();
    }
    writeln!(out, "</g>").unwrap();
    if !cuts.is_empty() {
        writeln!(out, r#"<g stroke="black" stroke-width="0.5">"#).unwrap();
        for cut in cuts {
            if let Some((p, q)) = clip(cut, -0.5, -0.5, w as f64 - 0.5, h as f64 - 0.5) {
                writeln!(
                    out,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                    num(sx(p.0)),
                    num(sy(p.1)),
                    num(sx(q.0)),
                    num(sy(q.1))
                )
                .unwrap();
            }
        }
        writeln!(out, "</g>").unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Text figure, top row first: `o` for points of the diagram, `.` for other
/// lattice points. With a cut, points on its positive side are drawn as `x`.
pub fn ascii(diagram: &Diagram, cut: Option<&AffineCut>) -> String {
    let (w, h) = extent(diagram);
    let mut out = String::new();
    if diagram.is_empty() {
        out.push_str("+\n");
        return out;
    }
    for y in (0..h).rev() {
        out.push('|');
        for x in 0..w {
            let p = LatticePoint::new(x, y);
            let c = if !diagram.contains(p) {
                '.'
            } else if cut.is_some_and(|c| c.sign_at(p).is_gt()) {
                'x'
            } else {
                'o'
            };
            out.push(' ');
            out.push(c);
        }
        out.push('\n');
    }
    out.push('+');
    out.push_str(&"--".repeat(w as usize));
    out.push('\n');
    out
}
