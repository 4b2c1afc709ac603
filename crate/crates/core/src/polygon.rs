//! Planar polylines and polygons: exact orientation tests, simplicity,
//! area and vertical cross-sections.

use robust::Coord;

pub type Point = [f64; 2];

fn coord(p: Point) -> Coord<f64> {
    Coord { x: p[0], y: p[1] }
}

/// Sign of the exact orientation determinant of `(a, b, c)`:
/// positive for a left turn.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    robust::orient2d(coord(a), coord(b), coord(c))
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p[0] >= a[0].min(b[0]) && p[0] <= a[0].max(b[0]) && p[1] >= a[1].min(b[1]) && p[1] <= a[1].max(b[1])
}

/// Whether the closed segments `[a, b]` and `[c, d]` share any point.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// Adjacent segments `[a, b]`, `[b, c]` may only share `b`; they fail when
/// the path folds back onto itself.
fn adjacent_overlap(a: Point, b: Point, c: Point) -> bool {
    if orient(a, b, c) != 0.0 {
        return false;
    }
    let u = [b[0] - a[0], b[1] - a[1]];
    let v = [c[0] - b[0], c[1] - b[1]];
    u[0] * v[0] + u[1] * v[1] < 0.0
}

#[derive(Clone, Copy)]
struct Bbox {
    lo: Point,
    hi: Point,
}

impl Bbox {
    fn of(a: Point, b: Point) -> Bbox {
        Bbox {
            lo: [a[0].min(b[0]), a[1].min(b[1])],
            hi: [a[0].max(b[0]), a[1].max(b[1])],
        }
    }

    fn overlaps(&self, o: &Bbox) -> bool {
        self.lo[0] <= o.hi[0] && o.lo[0] <= self.hi[0] && self.lo[1] <= o.hi[1] && o.lo[1] <= self.hi[1]
    }
}

/// First pair of non-adjacent edges that intersect, `None` when simple.
///
/// `closed` adds the edge from the last vertex back to the first. For an open
/// path, `allow_touching_ends` tolerates the first and last edges meeting at
/// the path's end points.
pub fn first_intersection(vertices: &[Point], closed: bool, allow_touching_ends: bool) -> Option<(usize, usize)> {
    let n = vertices.len();
    if n < 3 {
        return None;
    }
    let edge_count = if closed { n } else { n - 1 };
    let edge = |i: usize| (vertices[i], vertices[(i + 1) % n]);
    let boxes: Vec<Bbox> = (0..edge_count)
        .map(|i| {
            let (a, b) = edge(i);
            Bbox::of(a, b)
        })
        .collect();

    // Sort edges by left x so the pair scan can stop early.
    let mut order: Vec<usize> = (0..edge_count).collect();
    order.sort_by(|&i, &j| boxes[i].lo[0].total_cmp(&boxes[j].lo[0]).then(i.cmp(&j)));

    let mut found: Option<(usize, usize)> = None;
    for (oi, &i) in order.iter().enumerate() {
        for &j in &order[oi + 1..] {
            if boxes[j].lo[0] > boxes[i].hi[0] {
                break;
            }
            if !boxes[i].overlaps(&boxes[j]) {
                continue;
            }
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            let adjacent = hi == lo + 1 || (closed && lo == 0 && hi == edge_count - 1);
            let (a, b) = edge(lo);
            let (c, d) = edge(hi);
            let hit = if adjacent {
                if hi == lo + 1 {
                    adjacent_overlap(a, b, d)
                } else {
                    adjacent_overlap(c, d, b)
                }
            } else if !closed && allow_touching_ends && lo == 0 && hi == edge_count - 1 {
                false
            } else {
                segments_intersect(a, b, c, d)
            };
            if hit && found.is_none_or(|f| (lo, hi) < f) {
                found = Some((lo, hi));
            }
        }
    }
    found
}

/// Signed shoelace area, positive for counterclockwise vertex order.
pub fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        acc += a[0] * b[1] - b[0] * a[1];
    }
    0.5 * acc
}

/// Total length of the intersection of the vertical line `x = x0` with the
/// polygon interior (even-odd rule).
pub fn vertical_section(vertices: &[Point], x0: f64) -> f64 {
    let n = vertices.len();
    let mut ys = Vec::new();
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let crosses = (a[0] <= x0 && x0 < b[0]) || (b[0] <= x0 && x0 < a[0]);
        if crosses {
            let t = (x0 - a[0]) / (b[0] - a[0]);
            ys.push(a[1] + t * (b[1] - a[1]));
        }
    }
    ys.sort_by(f64::total_cmp);
    ys.chunks_exact(2).map(|c| c[1] - c[0]).sum()
}

/// Even-odd point-in-polygon test.
pub fn contains(vertices: &[Point], p: Point) -> bool {
    let n = vertices.len();
    let mut inside = false;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Drops vertices whose neighbors are exactly collinear with them and that
/// continue in the same direction.
pub fn collapse_collinear(vertices: &[Point]) -> Vec<Point> {
    let n = vertices.len();
    if n < 4 {
        return vertices.to_vec();
    }
    let mut out: Vec<Point> = Vec::with_capacity(n);
    for i in 0..n {
        let prev = vertices[(i + n - 1) % n];
        let cur = vertices[i];
        let next = vertices[(i + 1) % n];
        if cur == prev {
            continue;
        }
        let straight = orient(prev, cur, next) == 0.0
            && (cur[0] - prev[0]) * (next[0] - cur[0]) + (cur[1] - prev[1]) * (next[1] - cur[1]) > 0.0;
        if !straight {
            out.push(cur);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossing_and_touching_segments() {
        assert!(segments_intersect([0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]));
        assert!(!segments_intersect([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]));
        // T-junction
        assert!(segments_intersect([0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [1.0, 1.0]));
        // collinear, disjoint
        assert!(!segments_intersect([0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]));
        // collinear, overlapping
        assert!(segments_intersect([0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [3.0, 0.0]));
    }

    #[test]
    fn square_is_simple_bowtie_is_not() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        assert_eq!(first_intersection(&sq, true, false), None);
        assert!((signed_area(&sq) - 1.0).abs() < 1e-15);
        let bow = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
        assert_eq!(first_intersection(&bow, true, false), Some((0, 2)));
    }

    #[test]
    fn fold_back_is_detected() {
        let path = [[0.0, 0.0], [2.0, 0.0], [1.0, 0.0]];
        assert!(first_intersection(&path, false, false).is_some());
    }

    #[test]
    fn closed_circle_as_open_path() {
        let n = 64;
        let mut pts: Vec<Point> = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                [t.sin(), -t.cos()]
            })
            .collect();
        pts.push(pts[0]);
        assert!(first_intersection(&pts, false, false).is_some());
        assert_eq!(first_intersection(&pts, false, true), None);
    }

    #[test]
    fn rectangle_sections() {
        let r = [[-1.0, 0.0], [1.0, 0.0], [1.0, 0.5], [-1.0, 0.5]];
        assert_eq!(vertical_section(&r, 0.3), 0.5);
        assert_eq!(vertical_section(&r, -1.0), 0.5);
        assert_eq!(vertical_section(&r, 1.5), 0.0);
        assert!(contains(&r, [0.0, 0.25]));
        assert!(!contains(&r, [0.0, 0.75]));
    }

    #[test]
    fn collinear_vertices_collapse() {
        let mut v: Vec<Point> = (0..=10).map(|i| [i as f64 / 10.0, 0.0]).collect();
        v.extend((0..=10).rev().map(|i| [i as f64 / 10.0, 1.0]));
        let c = collapse_collinear(&v);
        assert_eq!(c.len(), 4);
    }
}
