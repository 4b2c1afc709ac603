//! Unit-speed planar curves: construction from parametric formulas or
//! curvature profiles, the canonical symmetric pose, and builtin presets.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exprparse::{Expr, Piece, Piecewise};
use crate::polygon::{self, Point};
use crate::quad::{split_at, GaussLegendre};
use crate::spline::CubicSpline;

/// Default number of grid intervals.
pub const DEFAULT_INTERVALS: usize = 2048;

/// Smallest accepted number of grid intervals.
pub const MIN_INTERVALS: usize = 64;

/// Tolerance on `sup |k(L-s) - k(s)|` for a curve to count as symmetric.
pub const EVEN_TOL: f64 = 1e-6;

/// Continuous curvature accessor.
#[derive(Debug, Clone, PartialEq)]
pub enum CurvatureFn {
    /// Curvature given by formula, possibly piecewise.
    Analytic(Piecewise),
    /// Cubic interpolation of sampled curvature.
    Sampled(CubicSpline),
}

impl CurvatureFn {
    pub fn eval(&self, s: f64) -> Result<f64> {
        match self {
            CurvatureFn::Analytic(p) => p.eval(s),
            CurvatureFn::Sampled(sp) => Ok(sp.eval(s)),
        }
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            CurvatureFn::Analytic(p) => p.breakpoints(),
            CurvatureFn::Sampled(_) => Vec::new(),
        }
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self, CurvatureFn::Analytic(_))
    }
}

/// Position and unit tangent at one arc-length value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub point: Point,
    pub tangent: Point,
}

impl Frame {
    /// Unit normal `(y', -x')` along which the tube is grown.
    pub fn normal(&self) -> Point {
        [self.tangent[1], -self.tangent[0]]
    }
}

/// Unit-speed sampled planar curve on the uniform grid `s_i = L i / n`.
#[derive(Debug, Clone)]
pub struct ArcCurve {
    s: Vec<f64>,
    points: Vec<Point>,
    tangents: Vec<Point>,
    /// Unwrapped tangent angle.
    theta: Vec<f64>,
    k: Vec<f64>,
    length: f64,
    kfn: CurvatureFn,
}

fn rule8() -> GaussLegendre {
    GaussLegendre::new(8)
}

fn snap_to_breakpoints(s: &mut [f64], breakpoints: &[f64], length: f64) {
    for &b in breakpoints {
        let h = length / (s.len() - 1) as f64;
        let i = (b / h).round() as usize;
        if i < s.len() && (s[i] - b).abs() <= 1e-12 * length {
            s[i] = b;
        }
    }
}

fn uniform_grid(length: f64, n: usize) -> Vec<f64> {
    let mut s: Vec<f64> = (0..=n).map(|i| length * (i as f64 / n as f64)).collect();
    s[n] = length;
    s
}

fn check_intervals(n: usize) -> Result<()> {
    if n < MIN_INTERVALS {
        return Err(Error::InvalidParameter(format!(
            "need at least {MIN_INTERVALS} grid intervals, got {n}"
        )));
    }
    Ok(())
}

fn unwrap_angles(theta: &mut [f64]) {
    for i in 1..theta.len() {
        let mut d = theta[i] - theta[i - 1];
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        theta[i] = theta[i - 1] + d;
    }
}

impl ArcCurve {
    /// Reconstructs the curve from its curvature: the tangent angle is the
    /// cumulative integral of `k` and the position the cumulative integral
    /// of the tangent. The result is in canonical pose.
    pub fn from_curvature(k: Piecewise, length: f64, n: usize) -> Result<ArcCurve> {
        check_intervals(n)?;
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "length must be positive, got {length}"
            )));
        }
        let tol = 1e-12 * length;
        if (k.lo() - 0.0).abs() > tol || (k.hi() - length).abs() > tol {
            return Err(Error::InvalidParameter(format!(
                "curvature pieces cover [{}, {}] but the curve length is {length}",
                k.lo(),
                k.hi()
            )));
        }
        let kfn = CurvatureFn::Analytic(k);
        let breakpoints = kfn.breakpoints();
        let mut s = uniform_grid(length, n);
        snap_to_breakpoints(&mut s, &breakpoints, length);

        let gl = rule8();
        let mut theta = vec![0.0; n + 1];
        let mut points = vec![[0.0, 0.0]; n + 1];
        for i in 0..n {
            let (a, b) = (s[i], s[i + 1]);
            theta[i + 1] = theta[i] + integrate_k(&kfn, &gl, a, b, &breakpoints)?;
            let step = rotate(unit(theta[i]), advance(&kfn, &gl, a, b, &breakpoints)?);
            points[i + 1] = [points[i][0] + step[0], points[i][1] + step[1]];
        }
        let ks = sample_k(&kfn, &s)?;
        let tangents = theta.iter().map(|&t| unit(t)).collect();
        ArcCurve {
            s,
            points,
            tangents,
            theta,
            k: ks,
            length,
            kfn,
        }
        .symmetrize()
    }

    /// Builds the curve from closed forms for the position and unit tangent
    /// at each arc length, with an exact curvature formula.
    pub fn from_closed_form<F>(k: Piecewise, length: f64, n: usize, frame: F) -> Result<ArcCurve>
    where
        F: Fn(f64) -> (Point, Point),
    {
        check_intervals(n)?;
        let kfn = CurvatureFn::Analytic(k);
        let mut s = uniform_grid(length, n);
        snap_to_breakpoints(&mut s, &kfn.breakpoints(), length);
        let mut points = Vec::with_capacity(n + 1);
        let mut tangents = Vec::with_capacity(n + 1);
        let mut theta = Vec::with_capacity(n + 1);
        for &si in &s {
            let (p, t) = frame(si);
            points.push(p);
            tangents.push(t);
            theta.push(t[1].atan2(t[0]));
        }
        unwrap_angles(&mut theta);
        let ks = sample_k(&kfn, &s)?;
        let c = ArcCurve {
            s,
            points,
            tangents,
            theta,
            k: ks,
            length,
            kfn,
        };
        c.check_simple()?;
        c.symmetrize()
    }

    /// Reparametrizes `t ↦ (x(t), y(t))` by arc length. Derivatives come
    /// from fourth-order finite differences in `t`; curvature follows from
    /// `k = (x'y'' - y'x'') / |γ'|³`. The result is in canonical pose.
    pub fn from_parametric(x: &Expr, y: &Expr, t_range: [f64; 2], n: usize) -> Result<ArcCurve> {
        check_intervals(n)?;
        let [ta, tb] = t_range;
        if !(ta.is_finite() && tb.is_finite() && ta < tb) {
            return Err(Error::InvalidParameter(format!(
                "t_range must be increasing and finite, got [{ta}, {tb}]"
            )));
        }
        let param = Parametric {
            x,
            y,
            a: ta,
            b: tb,
            h: 2e-3 * (tb - ta),
            h1: 5e-4 * (tb - ta),
        };
        let gl = rule8();

        // Cumulative arc length over equal t-panels.
        let tj: Vec<f64> = (0..=n).map(|j| ta + (tb - ta) * (j as f64 / n as f64)).collect();
        let mut cum = vec![0.0; n + 1];
        for j in 0..n {
            let mut acc = 0.0;
            for (t, w) in gl.mapped(tj[j], tj[j + 1]) {
                acc += w * param.speed(t)?;
            }
            cum[j + 1] = cum[j] + acc;
        }
        for &t in &tj {
            param.speed(t)?;
        }
        let length = cum[n];

        // Invert s ↦ t at the uniform arc-length grid.
        let s = uniform_grid(length, n);
        let mut ts = Vec::with_capacity(n + 1);
        for &si in &s {
            let j = cum.partition_point(|&c| c <= si).clamp(1, n) - 1;
            ts.push(param.invert(&gl, tj[j], tj[j + 1], si - cum[j])?);
        }
        ts[0] = ta;
        ts[n] = tb;

        let mut points = Vec::with_capacity(n + 1);
        let mut tangents = Vec::with_capacity(n + 1);
        let mut theta = Vec::with_capacity(n + 1);
        let mut ks = Vec::with_capacity(n + 1);
        for &t in &ts {
            let (p, d1, d2) = param.jet(t)?;
            let speed = d1[0].hypot(d1[1]);
            points.push(p);
            tangents.push([d1[0] / speed, d1[1] / speed]);
            theta.push(d1[1].atan2(d1[0]));
            ks.push((d1[0] * d2[1] - d1[1] * d2[0]) / (speed * speed * speed));
        }
        unwrap_angles(&mut theta);
        let kfn = CurvatureFn::Sampled(CubicSpline::natural(&s, &ks));
        let c = ArcCurve {
            s,
            points,
            tangents,
            theta,
            k: ks,
            length,
            kfn,
        };
        c.check_simple()?;
        c.symmetrize()
    }

    fn check_simple(&self) -> Result<()> {
        match polygon::first_intersection(&self.points, false, true) {
            Some((first, second)) => Err(Error::SelfIntersection { first, second }),
            None => Ok(()),
        }
    }

    /// `sup |k(L-s) - k(s)|` over grid nodes, skipping nodes whose mirror
    /// image sits on a curvature breakpoint.
    pub fn evenness_defect(&self) -> f64 {
        let n = self.intervals();
        let bps = self.kfn.breakpoints();
        let near_bp = |s: f64| bps.iter().any(|&b| (s - b).abs() <= 1e-12 * self.length);
        let mut worst: f64 = 0.0;
        for i in 0..=n / 2 {
            let (a, b) = (self.s[i], self.s[n - i]);
            if near_bp(a) || near_bp(b) {
                continue;
            }
            let d = (self.k[i] - self.k[n - i]).abs();
            worst = if d.is_nan() { f64::INFINITY } else { worst.max(d) };
        }
        worst
    }

    /// Applies the rigid motion taking `γ(L/2)` to the origin and `γ'(L/2)`
    /// to `(-1, 0)`. Requires even curvature.
    pub fn symmetrize(self) -> Result<ArcCurve> {
        let defect = self.evenness_defect();
        if defect > EVEN_TOL {
            return Err(Error::NotEven(defect));
        }
        let mid = self.frame_at(0.5 * self.length)?;
        let theta_mid = self.theta_at(0.5 * self.length)?;
        let [c, d] = mid.tangent;
        let rot = |v: Point| [-c * v[0] - d * v[1], d * v[0] - c * v[1]];
        let points = self
            .points
            .iter()
            .map(|p| rot([p[0] - mid.point[0], p[1] - mid.point[1]]))
            .collect();
        let tangents = self.tangents.iter().map(|&t| rot(t)).collect();
        let theta = self.theta.iter().map(|t| t - theta_mid + PI).collect();
        Ok(ArcCurve {
            points,
            tangents,
            theta,
            ..self
        })
    }

    pub fn intervals(&self) -> usize {
        self.s.len() - 1
    }

    pub fn n_nodes(&self) -> usize {
        self.s.len()
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    pub fn tangent(&self, i: usize) -> Point {
        self.tangents[i]
    }

    pub fn tangents(&self) -> &[Point] {
        &self.tangents
    }

    pub fn k_samples(&self) -> &[f64] {
        &self.k
    }

    pub fn curvature_fn(&self) -> &CurvatureFn {
        &self.kfn
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.kfn.breakpoints()
    }

    fn clamp_s(&self, s: f64) -> Result<f64> {
        let tol = 1e-12 * self.length;
        if !(s >= -tol && s <= self.length + tol) {
            return Err(Error::OutOfRange {
                s,
                lo: 0.0,
                hi: self.length,
            });
        }
        Ok(s.clamp(0.0, self.length))
    }

    pub fn curvature(&self, s: f64) -> Result<f64> {
        let s = self.clamp_s(s)?;
        self.kfn.eval(s)
    }

    /// Curvature at `s`, NaN when it cannot be evaluated.
    pub fn curvature_at(&self, s: f64) -> f64 {
        self.curvature(s).unwrap_or(f64::NAN)
    }

    /// Largest curvature over the grid nodes and breakpoints.
    pub fn k_max(&self) -> f64 {
        self.extreme_k(f64::max, f64::NEG_INFINITY)
    }

    /// Smallest curvature over the grid nodes and breakpoints.
    pub fn k_min(&self) -> f64 {
        self.extreme_k(f64::min, f64::INFINITY)
    }

    fn extreme_k(&self, pick: fn(f64, f64) -> f64, init: f64) -> f64 {
        let mut v = self.k.iter().copied().fold(init, pick);
        for b in self.breakpoints() {
            v = pick(v, self.curvature_at(b));
            if let Some(right) = self.right_limit(b) {
                v = pick(v, right);
            }
        }
        v
    }

    /// Value of the piece to the right of a breakpoint, which differs from
    /// `curvature(b)` at a jump.
    pub fn right_limit(&self, b: f64) -> Option<f64> {
        match &self.kfn {
            CurvatureFn::Analytic(p) => p
                .pieces()
                .iter()
                .find(|pc| pc.lo == b)
                .and_then(|pc| pc.expr.eval(b).ok()),
            CurvatureFn::Sampled(_) => None,
        }
    }

    fn nearest_node(&self, s: f64) -> usize {
        let h = self.length / self.intervals() as f64;
        ((s / h).round() as usize).min(self.intervals())
    }

    fn theta_at(&self, s: f64) -> Result<f64> {
        let s = self.clamp_s(s)?;
        let i = self.nearest_node(s);
        let gl = rule8();
        Ok(self.theta[i] + signed_integral_k(&self.kfn, &gl, self.s[i], s, &self.breakpoints())?)
    }

    /// Position and tangent at arbitrary `s`, integrated from the nearest
    /// grid node.
    pub fn frame_at(&self, s: f64) -> Result<Frame> {
        let s = self.clamp_s(s)?;
        let i = self.nearest_node(s);
        let bps = self.breakpoints();
        let gl = rule8();
        let t = self.tangents[i];
        let turn = signed_integral_k(&self.kfn, &gl, self.s[i], s, &bps)?;
        let step = if s >= self.s[i] {
            advance(&self.kfn, &gl, self.s[i], s, &bps)?
        } else {
            let back = advance_back(&self.kfn, &gl, self.s[i], s, &bps)?;
            [-back[0], -back[1]]
        };
        let step = rotate(t, step);
        let p = self.points[i];
        Ok(Frame {
            point: [p[0] + step[0], p[1] + step[1]],
            tangent: rotate(t, unit(turn)),
        })
    }

    /// Largest distance between two grid points' bounding-box corners.
    pub fn diameter(&self) -> f64 {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &self.points {
            for d in 0..2 {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        (hi[0] - lo[0]).hypot(hi[1] - lo[1])
    }
}

fn sample_k(kfn: &CurvatureFn, s: &[f64]) -> Result<Vec<f64>> {
    s.iter().map(|&si| kfn.eval(si)).collect()
}

/// `∫_a^b k` with `a ≤ b`, split at breakpoints.
fn integrate_k(kfn: &CurvatureFn, gl: &GaussLegendre, a: f64, b: f64, bps: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for (lo, hi) in split_at(a, b, bps) {
        for (u, w) in gl.mapped(lo, hi) {
            acc += w * kfn.eval(u)?;
        }
    }
    Ok(acc)
}

fn signed_integral_k(kfn: &CurvatureFn, gl: &GaussLegendre, a: f64, b: f64, bps: &[f64]) -> Result<f64> {
    if b >= a {
        integrate_k(kfn, gl, a, b, bps)
    } else {
        Ok(-integrate_k(kfn, gl, b, a, bps)?)
    }
}

fn unit(theta: f64) -> Point {
    let (sn, cs) = theta.sin_cos();
    [cs, sn]
}

/// Rotates `v` by the angle of the unit vector `t`.
fn rotate(t: Point, v: Point) -> Point {
    [t[0] * v[0] - t[1] * v[1], t[1] * v[0] + t[0] * v[1]]
}

/// `∫_a^b (cos φ(u), sin φ(u)) du` with `φ(u) = ∫_a^u k`, `a ≤ b`.
fn advance(kfn: &CurvatureFn, gl: &GaussLegendre, a: f64, b: f64, bps: &[f64]) -> Result<Point> {
    let mut acc = [0.0, 0.0];
    let mut phi_lo = 0.0;
    for (lo, hi) in split_at(a, b, bps) {
        for (u, w) in gl.mapped(lo, hi) {
            let (sn, cs) = (phi_lo + integrate_k(kfn, gl, lo, u, &[])?).sin_cos();
            acc[0] += w * cs;
            acc[1] += w * sn;
        }
        phi_lo += integrate_k(kfn, gl, lo, hi, &[])?;
    }
    Ok(acc)
}

/// `∫_b^a (cos φ(u), sin φ(u)) du` with `φ(u) = -∫_u^a k`, `b ≤ a`.
fn advance_back(kfn: &CurvatureFn, gl: &GaussLegendre, a: f64, b: f64, bps: &[f64]) -> Result<Point> {
    let mut acc = [0.0, 0.0];
    let mut phi_hi = 0.0;
    for (lo, hi) in split_at(b, a, bps).into_iter().rev() {
        for (u, w) in gl.mapped(lo, hi) {
            let (sn, cs) = (phi_hi - integrate_k(kfn, gl, u, hi, &[])?).sin_cos();
            acc[0] += w * cs;
            acc[1] += w * sn;
        }
        phi_hi -= integrate_k(kfn, gl, lo, hi, &[])?;
    }
    Ok(acc)
}

struct Parametric<'a> {
    x: &'a Expr,
    y: &'a Expr,
    a: f64,
    b: f64,
    /// Step for second derivatives.
    h: f64,
    /// Step for first derivatives.
    h1: f64,
}

impl Parametric<'_> {
    fn at(&self, t: f64) -> Result<Point> {
        Ok([self.x.eval(t)?, self.y.eval(t)?])
    }

    /// Position with first and second derivatives.
    fn jet(&self, t: f64) -> Result<(Point, Point, Point)> {
        Ok((self.at(t)?, self.derivative(t, 1)?, self.derivative(t, 2)?))
    }

    /// First or second derivative by fourth-order differences: central
    /// five-point stencils in the interior, one-sided stencils near the ends.
    fn derivative(&self, t: f64, order: usize) -> Result<Point> {
        let h = if order == 1 { self.h1 } else { self.h };
        let mut out = [0.0; 2];
        if t - 2.0 * h >= self.a && t + 2.0 * h <= self.b {
            let f: Vec<Point> = [-2.0, -1.0, 0.0, 1.0, 2.0]
                .iter()
                .map(|&j| self.at(t + j * h))
                .collect::<Result<_>>()?;
            for d in 0..2 {
                out[d] = if order == 1 {
                    (f[0][d] - 8.0 * f[1][d] + 8.0 * f[3][d] - f[4][d]) / (12.0 * h)
                } else {
                    (-f[0][d] + 16.0 * f[1][d] - 30.0 * f[2][d] + 16.0 * f[3][d] - f[4][d]) / (12.0 * h * h)
                };
            }
        } else {
            let step = if t - 2.0 * h < self.a { h } else { -h };
            let f: Vec<Point> = (0..6).map(|j| self.at(t + j as f64 * step)).collect::<Result<_>>()?;
            for d in 0..2 {
                out[d] = if order == 1 {
                    (-25.0 * f[0][d] + 48.0 * f[1][d] - 36.0 * f[2][d] + 16.0 * f[3][d] - 3.0 * f[4][d]) / (12.0 * step)
                } else {
                    (45.0 * f[0][d] - 154.0 * f[1][d] + 214.0 * f[2][d] - 156.0 * f[3][d] + 61.0 * f[4][d]
                        - 10.0 * f[5][d])
                        / (12.0 * h * h)
                };
            }
        }
        Ok(out)
    }

    fn speed(&self, t: f64) -> Result<f64> {
        let d1 = self.derivative(t, 1)?;
        let v = d1[0].hypot(d1[1]);
        if !(v >= 1e-10) {
            return Err(Error::NotRegular { t, speed: v });
        }
        Ok(v)
    }

    fn arc(&self, gl: &GaussLegendre, t0: f64, t: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (u, w) in gl.mapped(t0, t) {
            acc += w * self.speed(u)?;
        }
        Ok(acc)
    }

    /// Solves `∫_{t0}^{t} |γ'| = target` for `t ∈ [t0, t1]` by safeguarded
    /// Newton iteration.
    fn invert(&self, gl: &GaussLegendre, t0: f64, t1: f64, target: f64) -> Result<f64> {
        let (mut lo, mut hi) = (t0, t1);
        let total = self.arc(gl, t0, t1)?;
        let mut t = t0 + (t1 - t0) * (target / total).clamp(0.0, 1.0);
        for _ in 0..60 {
            let g = self.arc(gl, t0, t)? - target;
            if g.abs() <= 1e-15 * total.max(1e-300) {
                break;
            }
            if g > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let next = t - g / self.speed(t)?;
            t = if next > lo && next < hi { next } else { 0.5 * (lo + hi) };
            if hi - lo <= 1e-16 * (t1 - t0) {
                break;
            }
        }
        Ok(t)
    }
}

/// Named preset curves, all built in canonical pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    /// Straight segment of length `length`.
    Segment { length: f64 },
    /// Arc of radius `radius` subtending `2 * half_angle`, curvature `+1/R`.
    CircularArc { radius: f64, half_angle: f64 },
    /// Catenary arch with `k(s) = 1/(1 + (s - sinh a)²)` on `[0, 2 sinh a]`.
    Catenary { a: f64 },
    /// Piecewise-linear curvature `50s-25 | 5 | -50s+55` on `[0, 1.6]`.
    Moustache,
}

impl Builtin {
    pub fn name(&self) -> &'static str {
        match self {
            Builtin::Segment { .. } => "segment",
            Builtin::CircularArc { .. } => "circular_arc",
            Builtin::Catenary { .. } => "catenary",
            Builtin::Moustache => "moustache",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match *self {
            Builtin::Segment { length } if !(length.is_finite() && length > 0.0) => {
                bad(format!("segment length must be positive, got {length}"))
            }
            Builtin::CircularArc { radius, .. } if !(radius.is_finite() && radius > 0.0) => {
                bad(format!("circular_arc radius must be positive, got {radius}"))
            }
            Builtin::CircularArc { half_angle, .. } if !(half_angle > 0.0 && half_angle <= PI) => {
                bad(format!("circular_arc half-angle must lie in (0, pi], got {half_angle}"))
            }
            Builtin::Catenary { a } if !(a.is_finite() && a > 0.0) => {
                bad(format!("catenary parameter must be positive, got {a}"))
            }
            _ => Ok(()),
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            Builtin::Segment { length } => length,
            Builtin::CircularArc { radius, half_angle } => 2.0 * half_angle * radius,
            Builtin::Catenary { a } => 2.0 * a.sinh(),
            Builtin::Moustache => 1.6,
        }
    }

    /// Curvature profile as a piecewise expression in `s`.
    pub fn curvature(&self) -> Result<Piecewise> {
        let len = self.length();
        match *self {
            Builtin::Segment { .. } => Piecewise::single(Expr::constant(0.0, "s"), 0.0, len),
            Builtin::CircularArc { radius, .. } => Piecewise::single(Expr::constant(1.0 / radius, "s"), 0.0, len),
            Builtin::Catenary { a } => {
                Piecewise::single(Expr::parse(&format!("1/(1+(s-{:?})^2)", a.sinh()), "s")?, 0.0, len)
            }
            Builtin::Moustache => Piecewise::new(vec![
                Piece {
                    lo: 0.0,
                    hi: 0.6,
                    expr: Expr::parse("50*s-25", "s")?,
                },
                Piece {
                    lo: 0.6,
                    hi: 1.0,
                    expr: Expr::parse("5", "s")?,
                },
                Piece {
                    lo: 1.0,
                    hi: 1.6,
                    expr: Expr::parse("-50*s+55", "s")?,
                },
            ]),
        }
    }

    pub fn build(&self, n: usize) -> Result<ArcCurve> {
        self.validate()?;
        let len = self.length();
        let k = self.curvature()?;
        match *self {
            Builtin::Segment { .. } => ArcCurve::from_closed_form(k, len, n, |s| ([0.5 * len - s, 0.0], [-1.0, 0.0])),
            Builtin::CircularArc { radius, .. } => ArcCurve::from_closed_form(k, len, n, |s| {
                let psi = 0.5 * PI + (s - 0.5 * len) / radius;
                let (sn, cs) = psi.sin_cos();
                ([radius * cs, radius * sn - radius], [-sn, cs])
            }),
            Builtin::Catenary { a } => {
                let c = a.sinh();
                ArcCurve::from_closed_form(k, len, n, |s| {
                    let u = s - c;
                    let q = u.hypot(1.0);
                    ([-u.asinh(), 1.0 - q], [-1.0 / q, -u / q])
                })
            }
            Builtin::Moustache => ArcCurve::from_curvature(k, len, n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn assert_unit_speed(c: &ArcCurve) {
        for t in c.tangents() {
            assert!(close(t[0].hypot(t[1]), 1.0, 1e-8));
        }
    }

    #[test]
    fn quarter_circle_from_parametric() {
        let x = Expr::parse("2*cos(t)", "t").unwrap();
        let y = Expr::parse("2*sin(t)", "t").unwrap();
        let c = ArcCurve::from_parametric(&x, &y, [0.0, PI / 2.0], 512).unwrap();
        assert!(close(c.length(), PI, 1e-12), "{}", c.length());
        for &k in c.k_samples() {
            assert!(close(k.abs(), 0.5, 1e-8), "{k}");
        }
        // counterclockwise circle has positive curvature
        assert!(c.k_samples()[0] > 0.0);
        assert_unit_speed(&c);
    }

    #[test]
    fn parametric_segment() {
        let x = Expr::parse("t", "t").unwrap();
        let y = Expr::parse("0", "t").unwrap();
        let c = ArcCurve::from_parametric(&x, &y, [0.0, 3.0], 128).unwrap();
        assert!(close(c.length(), 3.0, 1e-13));
        assert!(c.k_samples().iter().all(|k| k.abs() < 1e-9));
        let p = c.points();
        assert!(close(p[0][0], 1.5, 1e-12) && close(p[128][0], -1.5, 1e-12));
    }

    #[test]
    fn stalled_parametrization_is_rejected() {
        let x = Expr::parse("t^3", "t").unwrap();
        let y = Expr::parse("0", "t").unwrap();
        let err = ArcCurve::from_parametric(&x, &y, [-1.0, 1.0], 64).unwrap_err();
        assert!(matches!(err, Error::NotRegular { .. }), "{err:?}");
    }

    #[test]
    fn self_intersecting_trace_is_rejected() {
        // nodal cubic: t = ±1 both map to the origin
        let x = Expr::parse("t^2-1", "t").unwrap();
        let y = Expr::parse("t^3-t", "t").unwrap();
        let err = ArcCurve::from_parametric(&x, &y, [-1.5, 1.5], 256).unwrap_err();
        assert!(matches!(err, Error::SelfIntersection { .. }), "{err:?}");
    }

    #[test]
    fn zero_curvature_gives_centered_segment() {
        let k = Piecewise::single(Expr::constant(0.0, "s"), 0.0, 2.0).unwrap();
        let c = ArcCurve::from_curvature(k, 2.0, 128).unwrap();
        let p = c.points();
        assert!(close(p[0][0], 1.0, 1e-14) && close(p[0][1], 0.0, 1e-14));
        assert!(close(p[128][0], -1.0, 1e-14) && close(p[128][1], 0.0, 1e-14));
    }

    #[test]
    fn unit_curvature_gives_quarter_arc() {
        let k = Piecewise::single(Expr::constant(1.0, "s"), 0.0, PI / 2.0).unwrap();
        let c = ArcCurve::from_curvature(k, PI / 2.0, 256).unwrap();
        // Recompute curvature from the points by the turning angle.
        let p = c.points();
        let h = c.length() / 256.0;
        for i in 1..256 {
            let a = [p[i][0] - p[i - 1][0], p[i][1] - p[i - 1][1]];
            let b = [p[i + 1][0] - p[i][0], p[i + 1][1] - p[i][1]];
            let turn = (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
            assert!(close(turn / h, 1.0, 1e-8));
        }
        // endpoints lie on the unit circle centered at (0, -1)
        assert!(close(p[0][0].hypot(p[0][1] + 1.0), 1.0, 1e-13));
    }

    #[test]
    fn unit_circle_arc_canonical_pose() {
        let c = Builtin::CircularArc {
            radius: 1.0,
            half_angle: PI / 2.0,
        }
        .build(256)
        .unwrap();
        assert!(close(c.length(), PI, 1e-15));
        let p = c.points();
        assert!(close(p[0][0], 1.0, 1e-14) && close(p[0][1], -1.0, 1e-14));
        assert!(close(p[256][0], -1.0, 1e-14) && close(p[256][1], -1.0, 1e-14));
        let m = c.frame_at(PI / 2.0).unwrap();
        assert!(m.point[0].abs() < 1e-15 && m.point[1].abs() < 1e-15);
        assert!(close(m.tangent[0], -1.0, 1e-15) && m.tangent[1].abs() < 1e-15);
        assert_eq!(m.normal(), [m.tangent[1], 1.0]);
    }

    #[test]
    fn symmetrize_is_idempotent_and_symmetric() {
        let c = Builtin::Moustache.build(DEFAULT_INTERVALS).unwrap();
        let twice = c.clone().symmetrize().unwrap();
        let diam = c.diameter();
        let n = c.intervals();
        for i in 0..=n {
            let (a, b) = (c.points()[i], twice.points()[i]);
            assert!(close(a[0], b[0], 1e-12) && close(a[1], b[1], 1e-12));
            let m = c.points()[n - i];
            assert!(close(a[0], -m[0], 1e-7 * diam) && close(a[1], m[1], 1e-7 * diam));
        }
    }

    #[test]
    fn uneven_curvature_is_rejected() {
        let k = Piecewise::single(Expr::parse("s", "s").unwrap(), 0.0, 1.0).unwrap();
        assert!(matches!(ArcCurve::from_curvature(k, 1.0, 64), Err(Error::NotEven(_))));
    }

    #[test]
    fn builtin_lengths_and_curvature() {
        let arc = Builtin::CircularArc {
            radius: 1.0,
            half_angle: PI / 4.0,
        }
        .build(256)
        .unwrap();
        assert!(close(arc.length(), PI / 2.0, 1e-15));
        let cat = Builtin::Catenary { a: 0.5 }.build(256).unwrap();
        assert!(close(cat.length(), 2.0 * 0.5f64.sinh(), 1e-15));
        let c = 0.5f64.sinh();
        for s in [0.0, 0.3, c, 0.9, 2.0 * c] {
            assert!(close(cat.curvature_at(s), 1.0 / (1.0 + (s - c).powi(2)), 1e-15));
        }
        let mst = Builtin::Moustache.build(DEFAULT_INTERVALS).unwrap();
        assert_eq!(mst.length(), 1.6);
        assert_eq!(mst.k_max(), 5.0);
        assert_eq!(mst.k_min(), -25.0);
        assert!(Builtin::CircularArc {
            radius: -1.0,
            half_angle: 1.0
        }
        .build(64)
        .is_err());
        assert!(Builtin::Catenary { a: 0.0 }.build(64).is_err());
    }

    #[test]
    fn moustache_breakpoints_are_nodes() {
        let c = Builtin::Moustache.build(DEFAULT_INTERVALS).unwrap();
        assert_eq!(c.s()[768], 0.6);
        assert_eq!(c.s()[1280], 1.0);
        assert_eq!(c.s()[1024], 0.8);
    }

    #[test]
    fn frame_at_matches_closed_form() {
        let r = 1.3;
        let c = Builtin::CircularArc {
            radius: r,
            half_angle: 1.1,
        }
        .build(128)
        .unwrap();
        let len = c.length();
        for i in 0..50 {
            let s = len * (i as f64 + 0.37) / 50.0;
            let f = c.frame_at(s).unwrap();
            let psi = 0.5 * PI + (s - 0.5 * len) / r;
            assert!(close(f.point[0], r * psi.cos(), 1e-14));
            assert!(close(f.point[1], r * psi.sin() - r, 1e-14));
            assert!(close(f.tangent[0], -psi.sin(), 1e-14));
        }
    }

    #[test]
    fn catenary_matches_parametric_reconstruction() {
        let a: f64 = 0.5;
        let c = Builtin::Catenary { a }.build(DEFAULT_INTERVALS).unwrap();
        let x = Expr::parse("-t", "t").unwrap();
        let y = Expr::parse("1-cosh(t)", "t").unwrap();
        let p = ArcCurve::from_parametric(&x, &y, [-a, a], DEFAULT_INTERVALS).unwrap();
        assert!(close(p.length(), c.length(), 1e-12));
        for i in (0..=DEFAULT_INTERVALS).step_by(16) {
            assert!(close(p.k_samples()[i], c.k_samples()[i], 1e-8));
            assert!(close(p.points()[i][0], c.points()[i][0], 1e-10));
            assert!(close(p.points()[i][1], c.points()[i][1], 1e-10));
        }
    }

    #[test]
    fn full_circle_is_accepted() {
        let c = Builtin::CircularArc {
            radius: 1.0,
            half_angle: PI,
        }
        .build(512)
        .unwrap();
        assert!(close(c.length(), 2.0 * PI, 1e-15));
    }
}
