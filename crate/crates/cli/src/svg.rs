//! SVG rendering of a planar tube domain.

use std::fmt::Write;

use tubeig_core::fermi::TubeDomain;
use tubeig_core::polygon::{self, Point};

const WIDTH: f64 = 800.0;

/// Fixed six-decimal coordinate without a negative zero.
fn fmt6(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// Drops interior vertices of an open polyline that lie exactly on the
/// straight continuation of their neighbours.
fn collapse_open(points: &[Point]) -> Vec<Point> {
    let mut out: Vec<Point> = Vec::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        if out.last() == Some(&p) {
            continue;
        }
        if i > 0 && i + 1 < points.len() {
            let (a, c) = (*out.last().expect("first point kept"), points[i + 1]);
            let forward = (p[0] - a[0]) * (c[0] - p[0]) + (p[1] - a[1]) * (c[1] - p[1]) > 0.0;
            if polygon::orient(a, p, c) == 0.0 && forward {
                continue;
            }
        }
        out.push(p);
    }
    out
}

/// SVG path data; `y` is flipped so that the picture is upright.
fn path_data(points: &[Point], closed: bool) -> String {
    let mut d = String::new();
    for (i, p) in points.iter().enumerate() {
        let _ = write!(d, "{}{} {}", if i == 0 { "M" } else { " L" }, fmt6(p[0]), fmt6(-p[1]));
    }
    if closed {
        d.push_str(" Z");
    }
    d
}

/// Boundary polygon (with collinear runs collapsed), base curve, offset
/// curve and symmetry axis.
pub struct Rendering {
    pub svg: String,
    pub boundary_nodes: usize,
}

pub fn render(d: &TubeDomain) -> Rendering {
    let boundary = polygon::collapse_collinear(d.boundary());
    let curve = collapse_open(d.curve().points());
    let offset = collapse_open(&d.offset_points());

    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &boundary {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        y0 = y0.min(-p[1]);
        y1 = y1.max(-p[1]);
    }
    let extent = (x1 - x0).max(y1 - y0);
    let margin = 0.05 * extent;
    let (vx, vy) = (x0 - margin, y0 - margin);
    let (vw, vh) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let stroke = fmt6(0.004 * extent);
    let dash = fmt6(0.02 * extent);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        fmt6(vx),
        fmt6(vy),
        fmt6(vw),
        fmt6(vh),
        fmt6(WIDTH),
        fmt6(WIDTH * vh / vw)
    );
    let _ = writeln!(
        svg,
        r##"  <path class="domain" d="{}" fill="#dce8f4" stroke="#1f3b5c" stroke-width="{stroke}" stroke-linejoin="round"/>"##,
        path_data(&boundary, true)
    );
    let _ = writeln!(
        svg,
        r##"  <path class="curve" d="{}" fill="none" stroke="#b03a2e" stroke-width="{}"/>"##,
        path_data(&curve, false),
        fmt6(0.008 * extent)
    );
    let _ = writeln!(
        svg,
        r##"  <path class="offset" d="{}" fill="none" stroke="#1f618d" stroke-width="{stroke}" stroke-dasharray="{dash}"/>"##,
        path_data(&offset, false)
    );
    let _ = writeln!(
        svg,
        r##"  <line class="axis" x1="0.000000" y1="{}" x2="0.000000" y2="{}" stroke="#555555" stroke-width="{stroke}" stroke-dasharray="{dash} {}"/>"##,
        fmt6(vy),
        fmt6(vy + vh),
        fmt6(0.01 * extent)
    );
    svg.push_str("</svg>\n");
    Rendering {
        svg,
        boundary_nodes: boundary.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tubeig_core::fermi::Dimension;
    use tubeig_core::geometry::Builtin;

    #[test]
    fn segment_renders_as_rectangle() {
        let d = TubeDomain::build(
            Builtin::Segment { length: 2.0 }.build(64).unwrap(),
            0.5,
            Dimension::Planar,
        )
        .unwrap();
        let r = render(&d);
        assert_eq!(r.boundary_nodes, 4);
        assert!(r
            .svg
            .contains(r#"d="M1.000000 0.000000 L-1.000000 0.000000 L-1.000000 -0.500000 L1.000000 -0.500000 Z""#));
        assert!(r
            .svg
            .contains(r#"class="curve" d="M1.000000 0.000000 L-1.000000 0.000000""#));
    }

    #[test]
    fn moustache_keeps_all_nodes() {
        let n = 512;
        let d = TubeDomain::build(Builtin::Moustache.build(n).unwrap(), 0.03, Dimension::Planar).unwrap();
        let r = render(&d);
        assert_eq!(r.boundary_nodes, 2 * n + 2);
        assert_eq!(r.svg, render(&d).svg);
    }

    #[test]
    fn no_negative_zero() {
        assert_eq!(fmt6(-1e-9), "0.000000");
        assert_eq!(fmt6(-0.5), "-0.500000");
    }
}
