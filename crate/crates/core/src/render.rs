//! SVG and text pictures of a brick diagram with its curves.
//!
//! The annulus is cut open just left of letter 0; curve pieces that run across
//! the cut are split and the two loose ends get small wrap markers.

use std::fmt::Write;

use crate::brick::{BrickDiagram, VertexKind, SCALE};
use crate::curves::{CurveEdge, CurveFamily};
use crate::slopes::{CrossingClass, CrossingReport};

const MARGIN: f64 = 30.0;
const UNIT: f64 = 10.0;
const ROW_GAP: f64 = 60.0;
const SHIFT: usize = 2;

struct Canvas {
    circle: usize,
}

impl Canvas {
    fn x(&self, u: f64) -> f64 {
        MARGIN + u * UNIT
    }

    fn y(&self, row: f64) -> f64 {
        MARGIN + (row - 1.0) * ROW_GAP
    }

    /// Pieces of the segment between two unwrapped points, cut at the seam.
    fn pieces(&self, (u1, r1): (f64, f64), (u2, r2): (f64, f64)) -> Vec<[(f64, f64); 2]> {
        let l = self.circle as f64;
        let (mut a, mut b) = if u1 <= u2 { ((u1, r1), (u2, r2)) } else { ((u2, r2), (u1, r1)) };
        a.0 += SHIFT as f64;
        b.0 += SHIFT as f64;
        let k = (a.0 / l).floor();
        a.0 -= k * l;
        b.0 -= k * l;
        if b.0 <= l {
            return vec![[a, b]];
        }
        let t = (l - a.0) / (b.0 - a.0);
        let mid = a.1 + t * (b.1 - a.1);
        vec![[a, (l, mid)], [(0.0, mid), (b.0 - l, b.1)]]
    }
}

fn edge_points(d: &BrickDiagram, e: &CurveEdge) -> Vec<(f64, f64)> {
    match *e {
        CurveEdge::RowArc { row, from, to } => {
            let len = match d.offset(from, to) {
                0 => d.circle(),
                o => o,
            };
            vec![(from as f64, row as f64), ((from + len) as f64, row as f64)]
        }
        CurveEdge::Vertical { pos } => {
            let g = d.segment(pos).generator as f64;
            let u = (pos * SCALE) as f64;
            vec![(u, g), (u, g + 1.0)]
        }
        CurveEdge::BrickArc { brick, from, to } => {
            let (s, t) = d.brick_span(&brick);
            let corner = |pos: usize, row: usize| {
                let u = if pos == brick.left_pos { s } else { t };
                (u as f64, row as f64)
            };
            let mid = ((s + t) as f64 / 2.0, brick.top_row as f64 + 0.5);
            vec![corner(from.pos, from.row), mid, corner(to.pos, to.row)]
        }
    }
}

pub fn render_svg(
    d: &BrickDiagram,
    family: Option<&CurveFamily>,
    crossings: Option<&CrossingReport>,
) -> String {
    let c = Canvas { circle: d.circle() };
    let m = d.strands();
    let width = 2.0 * MARGIN + d.circle() as f64 * UNIT;
    let height = 2.0 * MARGIN + (m as f64 - 1.0) * ROW_GAP;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<g class="rows" stroke="black" stroke-width="1">"#);
    for r in 1..=m {
        let y = c.y(r as f64);
        let _ = writeln!(out, r#"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}"/>"#, c.x(0.0), c.x(d.circle() as f64));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g class="segments" stroke="black" stroke-width="2">"#);
    for s in d.segments() {
        let x = c.x((s.pos * SCALE + SHIFT) as f64);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}"/>"#,
            c.y(s.generator as f64),
            c.y(s.generator as f64 + 1.0)
        );
    }
    let _ = writeln!(out, "</g>");
    for r in 1..=m {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="end">{r}</text>"#,
            MARGIN - 8.0,
            c.y(r as f64) + 4.0
        );
    }
    if let Some(f) = family {
        for (i, curve) in f.curves.iter().enumerate() {
            let _ = writeln!(
                out,
                r##"<g class="curve" data-index="{}" stroke="#1f5fbf" stroke-width="3" fill="none">"##,
                i + 1
            );
            let mut seams = Vec::new();
            for e in &curve.edges {
                let pts = edge_points(d, e);
                for w in pts.windows(2) {
                    let parts = c.pieces(w[0], w[1]);
                    if parts.len() == 2 {
                        seams.push(parts[0][1]);
                        seams.push(parts[1][0]);
                    }
                    for [a, b] in parts {
                        let _ = writeln!(
                            out,
                            r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#,
                            c.x(a.0),
                            c.y(a.1),
                            c.x(b.0),
                            c.y(b.1)
                        );
                    }
                }
            }
            for (u, r) in seams {
                let _ = writeln!(
                    out,
                    r#"<circle class="wrap" cx="{:.1}" cy="{:.1}" r="3" fill="white"/>"#,
                    c.x(u),
                    c.y(r)
                );
            }
            let _ = writeln!(out, "</g>");
        }
    }
    if let Some(rep) = crossings {
        let _ = writeln!(out, r#"<g class="type-x" fill="red">"#);
        for x in rep.crossings.iter().filter(|x| x.class == CrossingClass::X) {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.1}" cy="{:.1}" r="5"/>"#,
                c.x((x.pos * SCALE + SHIFT) as f64),
                c.y(x.generator as f64 + 0.5)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    out
}

/// One text line per row and per gap, `4 · letters` characters wide.
///
/// Rows: `-` plain, `=` on a curve, `v`/`^` up/down vertices. Gaps: `|` for a
/// segment, `X` for a Type X segment, `~` where a curve runs through a brick.
pub fn render_ascii(
    d: &BrickDiagram,
    family: Option<&CurveFamily>,
    crossings: Option<&CrossingReport>,
) -> String {
    let m = d.strands();
    let l = d.circle();
    let mut grid = vec![vec![' '; l]; 2 * m - 1];
    for r in 1..=m {
        grid[2 * (r - 1)].fill('-');
    }
    if let Some(f) = family {
        for curve in &f.curves {
            for e in &curve.edges {
                match *e {
                    CurveEdge::RowArc { row, from, to } => {
                        let len = match d.offset(from, to) {
                            0 => l,
                            o => o,
                        };
                        for o in 0..=len {
                            grid[2 * (row - 1)][(from + o) % l] = '=';
                        }
                    }
                    CurveEdge::BrickArc { brick, .. } => {
                        let (s, t) = d.brick_span(&brick);
                        for u in s + 1..t {
                            grid[2 * brick.top_row - 1][u % l] = '~';
                        }
                    }
                    CurveEdge::Vertical { .. } => {}
                }
            }
        }
    }
    for r in 1..=m {
        for v in d.row_vertices(r) {
            grid[2 * (r - 1)][v.pos * SCALE] = match v.kind {
                VertexKind::Up => 'v',
                VertexKind::Down => '^',
            };
        }
    }
    for s in d.segments() {
        let x = crossings
            .and_then(|rep| rep.crossings.get(s.pos))
            .is_some_and(|c| c.class == CrossingClass::X);
        grid[2 * s.generator - 1][s.pos * SCALE] = if x { 'X' } else { '|' };
    }
    let mut out = String::new();
    for line in grid {
        out.extend(line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{run_pipeline, Options};

    fn trefoil() -> crate::pipeline::PipelineResult {
        run_pipeline("1 1 1", &Options::default()).unwrap()
    }

    #[test]
    fn trefoil_svg_parts() {
        let r = trefoil();
        let d = r.diagram.as_ref().unwrap();
        let svg = render_svg(d, Some(&r.family), r.crossings.as_ref());
        let rows = svg.split(r#"<g class="rows""#).nth(1).unwrap().split("</g>").next().unwrap();
        assert_eq!(rows.matches("<line").count(), 2);
        let segs = svg.split(r#"<g class="segments""#).nth(1).unwrap().split("</g>").next().unwrap();
        assert_eq!(segs.matches("<line").count(), 3);
        assert_eq!(svg.matches(r#"class="curve""#).count(), 1);
        let xs = svg.split(r#"<g class="type-x""#).nth(1).unwrap().split("</g>").next().unwrap();
        assert_eq!(xs.matches("<circle").count(), 2);
        assert_eq!(svg, render_svg(d, Some(&r.family), r.crossings.as_ref()));
    }

    #[test]
    fn trefoil_ascii_grid() {
        let r = trefoil();
        let d = r.diagram.as_ref().unwrap();
        let text = render_ascii(d, Some(&r.family), r.crossings.as_ref());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines.iter().all(|l| l.chars().count() == 12));
        assert_eq!(lines[1].matches('X').count(), 2);
        assert_eq!(lines[1].matches('|').count(), 1);
    }

    #[test]
    fn diagram_only() {
        let r = trefoil();
        let d = r.diagram.as_ref().unwrap();
        let svg = render_svg(d, None, None);
        assert!(!svg.contains("curve"));
        let text = render_ascii(d, None, None);
        assert!(!text.contains('='));
    }
}
