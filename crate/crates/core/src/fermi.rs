//! Tube domains in Fermi coordinates `(r, s) ↦ γ(s) + r (y'(s), -x'(s))`.

use crate::error::{Error, Result};
use crate::geometry::ArcCurve;
use crate::polygon::{self, Point};
use crate::quad::Composite;

/// Default number of vertical lines sampled by [`TubeDomain::cross_sections`].
pub const DEFAULT_SECTION_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Dimension {
    Planar,
    /// Profile extruded along a fixed direction for a height `height`.
    Cylinder {
        height: f64,
    },
    /// Profile rotated about the `y` axis; only `s ∈ [0, L/2]` is swept.
    Revolution,
}

impl Dimension {
    pub fn name(&self) -> &'static str {
        match self {
            Dimension::Planar => "planar",
            Dimension::Cylinder { .. } => "cylinder",
            Dimension::Revolution => "revolution",
        }
    }
}

/// First and second fundamental form data of the base surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Signed infinity where the surface meets the rotation axis.
    pub d: f64,
    pub h: f64,
    pub k: f64,
}

/// Closed-form layer integrals `(∫₀^δ (1+rk) dr, ∫₀^δ dr/(1+rk))`.
pub fn layer_integrals(k: f64, delta: f64) -> Result<(f64, f64)> {
    let factor = 1.0 + delta * k;
    if !(factor > 0.0) {
        return Err(Error::InadmissibleDelta {
            delta,
            min_factor: factor,
        });
    }
    let plus = delta * (1.0 + 0.5 * delta * k);
    let minus = if k.abs() > 1e-12 {
        (delta * k).ln_1p() / k
    } else {
        delta
    };
    Ok((plus, minus))
}

/// Largest interior `-x'(s)` margin: positive iff `x'` stays below `-1e-9`
/// on the open interval, i.e. the curve is a graph over the `x` axis.
pub fn graph_margin(curve: &ArcCurve) -> f64 {
    let n = curve.intervals();
    (1..n).map(|i| -curve.tangent(i)[0]).fold(f64::INFINITY, f64::min) - 1e-9
}

pub fn is_graph(curve: &ArcCurve) -> bool {
    graph_margin(curve) > 0.0
}

/// Minimum of `1 + δ k(s)` over grid nodes and both sides of every
/// breakpoint, with the arc length where it occurs.
pub fn min_jacobian_factor(curve: &ArcCurve, delta: f64) -> (f64, f64) {
    let mut best = (f64::INFINITY, 0.0);
    let mut visit = |s: f64, k: f64| {
        let v = 1.0 + delta * k;
        let v = if v.is_nan() { f64::NEG_INFINITY } else { v };
        if v < best.0 {
            best = (v, s);
        }
    };
    for (&s, &k) in curve.s().iter().zip(curve.k_samples()) {
        visit(s, k);
    }
    for b in curve.breakpoints() {
        visit(b, curve.curvature_at(b));
        if let Some(p) = curve.right_limit(b) {
            visit(b, p);
        }
    }
    best
}

/// An arc-length curve with offset width and dimension tag.
#[derive(Debug, Clone)]
pub struct TubeDomain {
    curve: ArcCurve,
    delta: f64,
    dimension: Dimension,
    boundary: Vec<Point>,
}

impl TubeDomain {
    /// Builds the domain and verifies Jacobian positivity and boundary
    /// simplicity (plus the axis conditions for revolution).
    pub fn build(curve: ArcCurve, delta: f64, dimension: Dimension) -> Result<TubeDomain> {
        let d = TubeDomain::unchecked(curve, delta, dimension)?;
        let (min, s) = min_jacobian_factor(&d.curve, delta);
        if !(min > 0.0) {
            return Err(Error::JacobianNonPositive { s, min });
        }
        if let Some((first, second)) = d.boundary_intersection() {
            return Err(Error::BoundarySelfIntersection { first, second });
        }
        if let Dimension::Revolution = dimension {
            if let Some((s, min)) = d.revolution_violation() {
                return Err(Error::JacobianNonPositive { s, min });
            }
        }
        Ok(d)
    }

    /// Builds the domain after validating only the parameters, so that
    /// failed hypotheses can be reported rather than rejected.
    pub fn unchecked(curve: ArcCurve, delta: f64, dimension: Dimension) -> Result<TubeDomain> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
        }
        match dimension {
            Dimension::Cylinder { height } if !(height.is_finite() && height > 0.0) => {
                return Err(Error::InvalidParameter(format!(
                    "cylinder height must be positive, got {height}"
                )));
            }
            Dimension::Revolution if !curve.intervals().is_multiple_of(2) => {
                return Err(Error::InvalidParameter(
                    "revolution needs an even number of grid intervals".into(),
                ));
            }
            _ => {}
        }
        let n = curve.intervals();
        let last = match dimension {
            Dimension::Revolution => n / 2,
            _ => n,
        };
        let mut boundary: Vec<Point> = curve.points()[..=last].to_vec();
        for i in (0..=last).rev() {
            boundary.push(offset_point(&curve, i, delta));
        }
        Ok(TubeDomain {
            curve,
            delta,
            dimension,
            boundary,
        })
    }

    pub fn curve(&self) -> &ArcCurve {
        &self.curve
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn length(&self) -> f64 {
        self.curve.length()
    }

    /// Closed boundary polygon: the curve nodes followed by the offset nodes
    /// in reverse; the closing edges are the end caps.
    pub fn boundary(&self) -> &[Point] {
        &self.boundary
    }

    /// Arc-length range swept in `s`.
    pub fn s_range(&self) -> (f64, f64) {
        match self.dimension {
            Dimension::Revolution => (0.0, 0.5 * self.length()),
            _ => (0.0, self.length()),
        }
    }

    /// Offset curve `γ + δ (y', -x')` at the grid nodes.
    pub fn offset_points(&self) -> Vec<Point> {
        (0..self.curve.n_nodes())
            .map(|i| offset_point(&self.curve, i, self.delta))
            .collect()
    }

    /// First intersecting pair of boundary edges, if any.
    pub fn boundary_intersection(&self) -> Option<(usize, usize)> {
        polygon::first_intersection(&self.boundary, true, false)
    }

    /// For revolution: the first node where `x < 0` on `[0, L/2]` or where
    /// `x + δ z' ≤ 0` strictly inside, with the offending value.
    pub fn revolution_violation(&self) -> Option<(f64, f64)> {
        let n = self.curve.intervals();
        let tol = 1e-12 * self.curve.diameter().max(1.0);
        for i in 0..=n / 2 {
            let s = self.curve.s()[i];
            let x = self.curve.points()[i][0];
            if x < -tol {
                return Some((s, x));
            }
            if i > 0 && i < n / 2 {
                let outer = x + self.delta * self.curve.tangent(i)[1];
                if !(outer > 0.0) {
                    return Some((s, outer));
                }
            }
        }
        None
    }

    /// Point with Fermi coordinates `(r, s)`.
    pub fn map(&self, r: f64, s: f64) -> Result<Point> {
        let f = self.curve.frame_at(s)?;
        let nrm = f.normal();
        Ok([f.point[0] + r * nrm[0], f.point[1] + r * nrm[1]])
    }

    /// Volume factor of the Fermi map: `1 + rk` (planar, cylinder) or
    /// `(x + r z')(1 + rk)` (revolution). NaN when `s` is out of range.
    pub fn jacobian(&self, r: f64, s: f64) -> f64 {
        let planar = 1.0 + r * self.curve.curvature_at(s);
        match self.dimension {
            Dimension::Revolution => match self.curve.frame_at(s) {
                Ok(f) => (f.point[0] + r * f.tangent[1]) * planar,
                Err(_) => f64::NAN,
            },
            _ => planar,
        }
    }

    /// `(1 - 2rH + r²K) (EG - F²)^{1/2}` from the fundamental forms.
    pub fn general_jacobian(&self, r: f64, s: f64) -> Result<f64> {
        let ff = self.fundamental_forms(s)?;
        Ok((1.0 - 2.0 * r * ff.h + r * r * ff.k) * (ff.e * ff.g - ff.f * ff.f).sqrt())
    }

    /// Fundamental form data at `s` for cylinder and revolution domains.
    pub fn fundamental_forms(&self, s: f64) -> Result<FundamentalForms> {
        let (lo, hi) = self.s_range();
        if !(s >= lo && s <= hi) {
            return Err(Error::OutOfRange { s, lo, hi });
        }
        let k = self.curve.curvature(s)?;
        let (e, f, g, l, m, n, d) = match self.dimension {
            Dimension::Planar => {
                return Err(Error::InvalidParameter(
                    "fundamental forms need a cylinder or revolution domain".into(),
                ))
            }
            Dimension::Cylinder { .. } => (1.0, 0.0, 1.0, -k, 0.0, 0.0, 0.0),
            Dimension::Revolution => {
                let fr = self.curve.frame_at(s)?;
                let x = fr.point[0];
                let zp = fr.tangent[1];
                let on_axis = x.abs() <= 1e-12 * self.curve.diameter().max(1.0);
                let d = if on_axis { f64::INFINITY.copysign(zp) } else { zp / x };
                (1.0, 0.0, x * x, -k, 0.0, -x * zp, d)
            }
        };
        let det = e * g - f * f;
        let a = if det > 0.0 { (f * m - l * g) / det } else { k };
        let b = if det > 0.0 { (l * f - e * m) / det } else { 0.0 };
        let c = if det > 0.0 { (f * n - m * g) / det } else { 0.0 };
        Ok(FundamentalForms {
            e,
            f,
            g,
            l,
            m,
            n,
            a,
            b,
            c,
            d,
            h: -(a + d) / 2.0,
            k: a * d - b * c,
        })
    }

    /// `∫∫ (1 + rk) dr ds` over the Fermi rectangle.
    pub fn fermi_area(&self) -> f64 {
        let quad = Composite::new(0.0, self.length(), 256, 16, &self.curve.breakpoints());
        quad.integrate(|s| {
            let k = self.curve.curvature_at(s);
            self.delta * (1.0 + 0.5 * self.delta * k)
        })
    }

    /// Shoelace area of the boundary polygon.
    pub fn polygon_area(&self) -> f64 {
        polygon::signed_area(&self.boundary).abs()
    }

    /// Half-width `P = max |x|` over the boundary and the longest vertical
    /// section `S` over `x ∈ [0, P)`: `m` equally spaced lines plus every
    /// boundary vertex abscissa in that range.
    pub fn cross_sections(&self, m: usize) -> Result<(f64, f64)> {
        if self.dimension != Dimension::Planar {
            return Err(Error::InvalidParameter("cross sections need a planar domain".into()));
        }
        let p = self.boundary.iter().fold(0.0f64, |acc, v| acc.max(v[0].abs()));
        if !(p > 0.0) || !(self.polygon_area() > 0.0) {
            return Err(Error::DegeneratePolygon(format!(
                "half-width {p}, area {}",
                self.polygon_area()
            )));
        }
        let m = m.max(1);
        let mut s_max: f64 = 0.0;
        for j in 0..m {
            s_max = s_max.max(polygon::vertical_section(&self.boundary, p * (j as f64 / m as f64)));
        }
        for v in &self.boundary {
            if v[0] >= 0.0 && v[0] < p {
                s_max = s_max.max(polygon::vertical_section(&self.boundary, v[0]));
            }
        }
        Ok((p, s_max))
    }
}

fn offset_point(curve: &ArcCurve, i: usize, delta: f64) -> Point {
    let p = curve.points()[i];
    let t = curve.tangent(i);
    [p[0] + delta * t[1], p[1] - delta * t[0]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Builtin, DEFAULT_INTERVALS};
    use std::f64::consts::PI;

    fn segment(len: f64) -> ArcCurve {
        Builtin::Segment { length: len }.build(DEFAULT_INTERVALS).unwrap()
    }

    fn sector(alpha: f64) -> ArcCurve {
        Builtin::CircularArc {
            radius: 1.0,
            half_angle: alpha,
        }
        .build(DEFAULT_INTERVALS)
        .unwrap()
    }

    #[test]
    fn segment_tube_is_rectangle() {
        let d = TubeDomain::build(segment(2.0), 0.5, Dimension::Planar).unwrap();
        assert!((d.polygon_area() - 1.0).abs() < 1e-14);
        assert_eq!(d.cross_sections(DEFAULT_SECTION_SAMPLES).unwrap(), (1.0, 0.5));
        let b = d.boundary();
        assert_eq!(b[0], [1.0, 0.0]);
        assert_eq!(b[b.len() - 1], [1.0, 0.5]);
    }

    #[test]
    fn moustache_wide_tube_is_rejected() {
        let c = Builtin::Moustache.build(DEFAULT_INTERVALS).unwrap();
        match TubeDomain::build(c, 0.05, Dimension::Planar) {
            Err(Error::JacobianNonPositive { min, .. }) => assert!((min + 0.25).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sector_tube_is_annular() {
        let d = TubeDomain::build(sector(PI / 4.0), 0.1, Dimension::Planar).unwrap();
        let center = [0.0, -1.0];
        for (i, v) in d.boundary().iter().enumerate() {
            let rho = (v[0] - center[0]).hypot(v[1] - center[1]);
            let want = if i <= DEFAULT_INTERVALS { 1.0 } else { 1.1 };
            assert!((rho - want).abs() < 1e-14);
        }
        let (p, _) = d.cross_sections(DEFAULT_SECTION_SAMPLES).unwrap();
        assert!((p - 1.1 * (PI / 4.0).sin()).abs() < 1e-14);
    }

    #[test]
    fn layer_integral_values() {
        assert_eq!(layer_integrals(0.0, 0.1).unwrap(), (0.1, 0.1));
        let (_, m) = layer_integrals(1.0, 0.1).unwrap();
        assert!((m - 1.1f64.ln()).abs() < 1e-16);
        let (p, _) = layer_integrals(5.0, 0.03).unwrap();
        assert!((p - 0.03225).abs() < 1e-16);
        assert!(layer_integrals(-10.0, 0.1).is_err());
    }

    #[test]
    fn jacobian_values() {
        let r = 2.0;
        let c = Builtin::CircularArc {
            radius: r,
            half_angle: 0.5,
        }
        .build(256)
        .unwrap();
        let d = TubeDomain::build(c, 0.3, Dimension::Planar).unwrap();
        assert!((d.jacobian(0.3, 0.4) - (r + 0.3) / r).abs() < 1e-15);
        assert_eq!(d.jacobian(0.0, 0.7), 1.0);
    }

    #[test]
    fn graph_detection() {
        assert!(is_graph(&segment(1.0)));
        assert!(is_graph(&sector(PI / 4.0)));
        assert!(!is_graph(&sector(3.0 * PI / 4.0)));
        assert!(!is_graph(&Builtin::Moustache.build(DEFAULT_INTERVALS).unwrap()));
    }

    #[test]
    fn cylinder_forms_over_moustache() {
        let c = Builtin::Moustache.build(DEFAULT_INTERVALS).unwrap();
        let d = TubeDomain::build(c, 0.03, Dimension::Cylinder { height: 1.0 }).unwrap();
        let ff = d.fundamental_forms(0.8).unwrap();
        assert_eq!((ff.a, ff.d), (5.0, 0.0));
        assert_eq!((ff.e, ff.f, ff.g, ff.b, ff.c), (1.0, 0.0, 1.0, 0.0, 0.0));
    }

    #[test]
    fn revolution_forms_on_sphere() {
        let c = Builtin::CircularArc {
            radius: 1.0,
            half_angle: PI,
        }
        .build(DEFAULT_INTERVALS)
        .unwrap();
        let d = TubeDomain::build(c, 0.1, Dimension::Revolution).unwrap();
        let ff = d.fundamental_forms(PI / 2.0).unwrap();
        let x = d.curve().frame_at(PI / 2.0).unwrap().point[0];
        assert!((x - 1.0).abs() < 1e-14);
        assert!((ff.a - 1.0).abs() < 1e-14 && (ff.d - 1.0).abs() < 1e-14);
        assert!((ff.g - 1.0).abs() < 1e-14);
        // poles: d flagged infinite, product Jacobian stays finite
        assert!(d.fundamental_forms(0.0).unwrap().d.is_infinite());
        assert!(d.jacobian(0.05, 0.0).abs() < 1e-14);
    }

    #[test]
    fn product_and_general_jacobians_agree() {
        let cyl = TubeDomain::build(
            Builtin::Catenary { a: 0.5 }.build(512).unwrap(),
            0.2,
            Dimension::Cylinder { height: 2.0 },
        )
        .unwrap();
        let rev = TubeDomain::build(
            Builtin::CircularArc {
                radius: 1.0,
                half_angle: PI,
            }
            .build(512)
            .unwrap(),
            0.1,
            Dimension::Revolution,
        )
        .unwrap();
        for d in [&cyl, &rev] {
            let (lo, hi) = d.s_range();
            for i in 1..64 {
                let s = lo + (hi - lo) * i as f64 / 64.0;
                let ff = d.fundamental_forms(s).unwrap();
                assert!((ff.h + (ff.a + ff.d) / 2.0).abs() < 1e-10);
                assert!((ff.k - (ff.a * ff.d - ff.b * ff.c)).abs() < 1e-10);
                for r in [0.0, 0.03, 0.1] {
                    let prod = d.jacobian(r, s);
                    let gen = d.general_jacobian(r, s).unwrap();
                    assert!((prod - gen).abs() < 1e-12, "{prod} {gen}");
                }
            }
        }
    }

    #[test]
    fn fermi_area_matches_shoelace() {
        for c in [
            Builtin::Moustache.build(DEFAULT_INTERVALS).unwrap(),
            sector(PI / 4.0),
            Builtin::Catenary { a: 0.5 }.build(DEFAULT_INTERVALS).unwrap(),
        ] {
            let d = TubeDomain::build(c, 0.03, Dimension::Planar).unwrap();
            let rel = (d.fermi_area() - d.polygon_area()).abs() / d.fermi_area();
            assert!(rel < 1e-3, "{rel}");
        }
    }

    #[test]
    fn bad_parameters() {
        assert!(TubeDomain::build(segment(1.0), 0.0, Dimension::Planar).is_err());
        assert!(TubeDomain::build(segment(1.0), 0.1, Dimension::Cylinder { height: -1.0 }).is_err());
    }
}
