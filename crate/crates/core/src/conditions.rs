//! Hypothesis checks for the lower bounds and the conditions under which
//! the first nontrivial eigenvalue is the odd one.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fermi::{self, Dimension, TubeDomain};
use crate::geometry::{ArcCurve, CurvatureFn, EVEN_TOL};
use crate::quad::{Composite, GaussLegendre};
use crate::roots;

/// Margins smaller than this in magnitude are reported as failing ties.
pub const TIE_TOL: f64 = 1e-12;

/// Intervals of the fine grid on which analytic curvature is tested for
/// concavity.
pub const FINE_INTERVALS: usize = 1 << 16;

/// Composite rule used for all `s`-integrals.
pub const S_PANELS: usize = 256;
pub const S_POINTS: usize = 16;

/// Number of `r` samples used for the revolution Jacobian checks.
pub const R_SAMPLES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// Positive when the hypothesis holds with slack.
    pub margin: f64,
    pub detail: String,
}

impl Check {
    pub fn new(name: &'static str, margin: f64, detail: String) -> Check {
        if margin.is_nan() {
            return Check {
                name,
                pass: false,
                margin,
                detail: format!("{detail} (not evaluable)"),
            };
        }
        if margin.abs() < TIE_TOL {
            return Check {
                name,
                pass: false,
                margin: 0.0,
                detail: format!("{detail} (boundary case)"),
            };
        }
        Check {
            name,
            pass: margin > 0.0,
            margin,
            detail,
        }
    }
}

/// Which result's hypotheses a report evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Theorem1,
    Prop31,
    Prop32,
    TheoremGc,
    Theorem33,
}

impl Route {
    pub fn name(&self) -> &'static str {
        match self {
            Route::Theorem1 => "thm1",
            Route::Prop31 => "prop31",
            Route::Prop32 => "prop32",
            Route::TheoremGc => "thm_gc",
            Route::Theorem33 => "thm_33",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub checks: Vec<Check>,
    pub overall: bool,
    pub route: Route,
    /// False when a precondition of the route fails, e.g. the curve is not
    /// a graph for the cross-section condition.
    pub applicable: bool,
    /// Named intermediate values, in a fixed order.
    pub quantities: Vec<(&'static str, f64)>,
}

impl ConditionReport {
    pub fn new(route: Route, checks: Vec<Check>, quantities: Vec<(&'static str, f64)>) -> ConditionReport {
        ConditionReport {
            overall: checks.iter().all(|c| c.pass),
            checks,
            route,
            applicable: true,
            quantities,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn quantity(&self, name: &str) -> Option<f64> {
        self.quantities.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }
}

/// Smallest value of `τ_i + floor - D_i` over interior samples, where
/// `D_i` is the change of slope at `s_i` and `τ_i` bounds its rounding
/// error. Non-negative (beyond rounding) iff the samples are concave.
/// Returns the margin and the abscissa where it is attained.
pub fn concavity_margin(s: &[f64], f: &[f64], floor: f64) -> (f64, f64) {
    const GUARD: f64 = 16.0 * f64::EPSILON;
    let mut best = (f64::INFINITY, s.first().copied().unwrap_or(0.0));
    for i in 1..s.len().saturating_sub(1) {
        let hp = s[i + 1] - s[i];
        let hm = s[i] - s[i - 1];
        let d = (f[i + 1] - f[i]) / hp - (f[i] - f[i - 1]) / hm;
        let tau = GUARD * ((f[i + 1].abs() + f[i].abs()) / hp + (f[i].abs() + f[i - 1].abs()) / hm);
        let m = tau + floor - d;
        let m = if m.is_nan() { f64::NEG_INFINITY } else { m };
        if m < best.0 {
            best = (m, s[i]);
        }
    }
    best
}

/// Concavity margin of the curvature: analytic profiles are sampled on a
/// fine grid that contains every breakpoint; interpolated profiles on the
/// curve's own nodes with a noise floor.
pub fn curvature_concavity(curve: &ArcCurve) -> (f64, f64) {
    let len = curve.length();
    match curve.curvature_fn() {
        CurvatureFn::Analytic(_) => {
            let mut s: Vec<f64> = (0..=FINE_INTERVALS)
                .map(|j| len * (j as f64 / FINE_INTERVALS as f64))
                .collect();
            s.extend(curve.breakpoints());
            s.sort_by(f64::total_cmp);
            s.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * len);
            let k: Vec<f64> = s.iter().map(|&x| curve.curvature_at(x)).collect();
            let scale = k.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            concavity_margin(&s, &k, 1e-10 * scale)
        }
        CurvatureFn::Sampled(_) => {
            let k = curve.k_samples();
            let scale = k.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let h = len / curve.intervals() as f64;
            concavity_margin(curve.s(), k, 1e-9 * scale / h)
        }
    }
}

fn even_check(curve: &ArcCurve) -> Check {
    let defect = curve.evenness_defect();
    Check::new(
        "curvature_even",
        EVEN_TOL - defect,
        format!("sup |k(L-s) - k(s)| = {defect:e}"),
    )
}

fn concave_check(curve: &ArcCurve) -> Check {
    let (margin, s) = curvature_concavity(curve);
    Check::new("curvature_concave", margin, format!("tightest slope change at s = {s}"))
}

fn jacobian_check(curve: &ArcCurve, delta: f64) -> Check {
    let (min, s) = fermi::min_jacobian_factor(curve, delta);
    Check::new(
        "jacobian_positive",
        min,
        format!("min (1 + delta k) = {min} at s = {s}"),
    )
}

fn simple_check(d: &TubeDomain) -> Check {
    match d.boundary_intersection() {
        None => Check::new("simple_connectivity", 1.0, "boundary polygon is simple".into()),
        Some((a, b)) => Check::new(
            "simple_connectivity",
            -1.0,
            format!("boundary edges {a} and {b} intersect"),
        ),
    }
}

/// Hypotheses of the planar lower bound: even and concave curvature,
/// positive Jacobian and a simple boundary.
pub fn check_theorem1(d: &TubeDomain) -> ConditionReport {
    let c = d.curve();
    ConditionReport::new(
        Route::Theorem1,
        vec![
            even_check(c),
            concave_check(c),
            jacobian_check(c, d.delta()),
            simple_check(d),
        ],
        vec![("k_min", c.k_min()), ("k_max", c.k_max())],
    )
}

fn s_rule(curve: &ArcCurve) -> Composite {
    Composite::new(0.0, curve.length(), S_PANELS, S_POINTS, &curve.breakpoints())
}

/// Cross-section condition for graph-like curves: `S² < P² ∫sin²/∫cos²`
/// with the integrals of `sin²(πx/2P)`, `cos²(πx/2P)` over the domain.
pub fn check_prop31(d: &TubeDomain) -> ConditionReport {
    let curve = d.curve();
    let gm = fermi::graph_margin(curve);
    let graph = Check::new("is_graph", gm, format!("min -x'(s) - 1e-9 = {gm:e}"));
    if !graph.pass || d.dimension() != Dimension::Planar {
        let mut r = ConditionReport::new(Route::Prop31, vec![graph], Vec::new());
        r.overall = false;
        r.applicable = false;
        return r;
    }
    let (p, s) = match d.cross_sections(fermi::DEFAULT_SECTION_SAMPLES) {
        Ok(v) => v,
        Err(e) => {
            let mut r = ConditionReport::new(
                Route::Prop31,
                vec![graph, Check::new("so", f64::NAN, e.to_string())],
                Vec::new(),
            );
            r.applicable = false;
            return r;
        }
    };
    let (int_sin, int_cos) = trig_moments(d, p);
    let rhs = p * p * int_sin / int_cos;
    let margin = rhs - s * s;
    ConditionReport::new(
        Route::Prop31,
        vec![
            graph,
            Check::new("so", margin, format!("S^2 = {} vs P^2 sin/cos = {rhs}", s * s)),
        ],
        vec![
            ("P", p),
            ("S", s),
            ("int_sin2", int_sin),
            ("int_cos2", int_cos),
            ("rhs", rhs),
        ],
    )
}

/// `(∫_D sin²(πx/2P), ∫_D cos²(πx/2P))` over the Fermi rectangle with
/// measure `(1 + rk) dr ds`.
pub fn trig_moments(d: &TubeDomain, p: f64) -> (f64, f64) {
    let curve = d.curve();
    let rq = GaussLegendre::new(S_POINTS);
    let w = PI / (2.0 * p);
    let mut acc = (0.0, 0.0);
    for (s, ws) in s_rule(curve).points() {
        let f = match curve.frame_at(s) {
            Ok(f) => f,
            Err(_) => return (f64::NAN, f64::NAN),
        };
        let k = curve.curvature_at(s);
        for (r, wr) in rq.mapped(0.0, d.delta()) {
            let x = f.point[0] + r * f.tangent[1];
            let jac = 1.0 + r * k;
            let (sn, cs) = (w * x).sin_cos();
            acc.0 += ws * wr * jac * sn * sn;
            acc.1 += ws * wr * jac * cs * cs;
        }
    }
    acc
}

/// Which sign pattern of `k` selects the left-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureSign {
    /// `k ≥ 0` everywhere.
    NonNegative,
    /// `k < 0` everywhere.
    Negative,
    /// `k` changes sign.
    Mixed,
}

impl CurvatureSign {
    pub fn case(&self) -> u8 {
        match self {
            CurvatureSign::NonNegative => 1,
            CurvatureSign::Negative => 2,
            CurvatureSign::Mixed => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prop32Terms {
    pub sign: CurvatureSign,
    /// `max δ² (2 + δk)²`.
    pub lhs1: f64,
    /// `max 4δ² / (1 + δk)²`.
    pub lhs2: f64,
    pub lhs: f64,
    /// `∫ cos²(πs/L) I₊(k(s), δ) ds`.
    pub num: f64,
    /// `∫ sin²(πs/L) I₋(k(s), δ) ds`.
    pub den: f64,
    /// `(L²/π²) num / den`.
    pub rhs: f64,
}

impl Prop32Terms {
    pub fn q(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Terms of the layer-integral condition for the curve at width `delta`.
pub fn prop32_terms(curve: &ArcCurve, delta: f64) -> Result<Prop32Terms> {
    let (min_factor, _) = fermi::min_jacobian_factor(curve, delta);
    if !(min_factor > 0.0) {
        return Err(Error::InadmissibleDelta { delta, min_factor });
    }
    let (kmin, kmax) = (curve.k_min(), curve.k_max());
    let sign = if kmin >= 0.0 {
        CurvatureSign::NonNegative
    } else if kmax < 0.0 {
        CurvatureSign::Negative
    } else {
        CurvatureSign::Mixed
    };
    // δ²(2+δk)² grows with k where 2+δk > 0 (always, given 1+δk > 0);
    // 4δ²/(1+δk)² shrinks with k.
    let lhs1 = (delta * (2.0 + delta * kmax)).powi(2);
    let lhs2 = 4.0 * delta * delta / (min_factor * min_factor);
    let lhs = match sign {
        CurvatureSign::NonNegative => lhs1,
        CurvatureSign::Negative => lhs2,
        CurvatureSign::Mixed => lhs1.max(lhs2),
    };
    let len = curve.length();
    let mut num = 0.0;
    let mut den = 0.0;
    for (s, w) in s_rule(curve).points() {
        let k = curve.curvature(s)?;
        let (ip, im) = fermi::layer_integrals(k, delta)?;
        let (sn, cs) = (PI * s / len).sin_cos();
        num += w * cs * cs * ip;
        den += w * sn * sn * im;
    }
    let rhs = len * len / (PI * PI) * num / den;
    Ok(Prop32Terms {
        sign,
        lhs1,
        lhs2,
        lhs,
        num,
        den,
        rhs,
    })
}

/// Layer-integral condition `LHS < (L²/π²) Num/Den` with the left-hand
/// side chosen by the sign pattern of `k`.
pub fn check_prop32(d: &TubeDomain) -> ConditionReport {
    match prop32_terms(d.curve(), d.delta()) {
        Ok(t) => ConditionReport::new(
            Route::Prop32,
            vec![Check::new(
                "delta",
                t.q(),
                format!("case {}: LHS = {} vs RHS = {}", t.sign.case(), t.lhs, t.rhs),
            )],
            vec![
                ("case", t.sign.case() as f64),
                ("lhs1", t.lhs1),
                ("lhs2", t.lhs2),
                ("lhs", t.lhs),
                ("num", t.num),
                ("den", t.den),
                ("rhs", t.rhs),
            ],
        ),
        Err(e) => ConditionReport::new(
            Route::Prop32,
            vec![Check::new("delta", f64::NEG_INFINITY, e.to_string())],
            Vec::new(),
        ),
    }
}

/// `Q(δ) = RHS(δ) - LHS(δ)`.
pub fn q_of_delta(curve: &ArcCurve, delta: f64) -> Result<f64> {
    Ok(prop32_terms(curve, delta)?.q())
}

/// Supremum of the widths with `1 + δk > 0`: `-1/min k`, or infinity.
pub fn admissibility_limit(curve: &ArcCurve) -> f64 {
    let kmin = curve.k_min();
    if kmin < 0.0 {
        -1.0 / kmin
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    /// Smallest positive root of `Q`, or the admissibility limit when no
    /// sign change was found.
    pub delta: f64,
    pub root_found: bool,
    pub limit: f64,
}

/// Smallest positive root of `Q`, bracketed by a geometric scan from
/// `1e-4` up to the admissibility limit (or `100 L`) and refined by
/// bisection to `1e-6`.
pub fn delta_threshold(curve: &ArcCurve) -> Threshold {
    let limit = admissibility_limit(curve);
    let lo = 1e-4;
    let hi = if limit.is_finite() {
        limit * (1.0 - 1e-9)
    } else {
        100.0 * curve.length()
    };
    let q = |x: f64| q_of_delta(curve, x).unwrap_or(f64::NAN);
    if hi > lo {
        if let Some((a, b)) = roots::geometric_scan(q, lo, hi, 400) {
            return Threshold {
                delta: roots::bisect(q, a, b, 1e-6),
                root_found: true,
                limit,
            };
        }
    }
    Threshold {
        delta: limit,
        root_found: false,
        limit,
    }
}

/// Hypotheses of the 3D bounds. Cylinders reuse the planar checks on the
/// profile; surfaces of revolution check positivity and concavity in `s` of
/// `det J(r, s)` on `[0, L/2]` for sampled `r`.
pub fn check_3d(d: &TubeDomain) -> ConditionReport {
    let c = d.curve();
    match d.dimension() {
        Dimension::Planar => check_theorem1(d),
        Dimension::Cylinder { .. } => {
            let mut r = check_theorem1(d);
            r.route = Route::TheoremGc;
            r
        }
        Dimension::Revolution => {
            let n = c.intervals();
            let half = n / 2;
            let s = &c.s()[..=half];
            let h = c.length() / n as f64;
            let mut pos = (f64::INFINITY, 0.0, 0.0);
            let mut conc = (f64::INFINITY, 0.0, 0.0);
            for j in 0..R_SAMPLES {
                let r = d.delta() * j as f64 / (R_SAMPLES - 1) as f64;
                let det: Vec<f64> = (0..=half)
                    .map(|i| (c.points()[i][0] + r * c.tangent(i)[1]) * (1.0 + r * c.k_samples()[i]))
                    .collect();
                for i in 1..half {
                    if det[i] < pos.0 || det[i].is_nan() {
                        pos = (if det[i].is_nan() { f64::NEG_INFINITY } else { det[i] }, r, s[i]);
                    }
                }
                let scale = det.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
                let (m, at) = concavity_margin(s, &det, 1e-9 * scale / h);
                if m < conc.0 {
                    conc = (m, r, at);
                }
            }
            let axis = match d.revolution_violation() {
                Some((s, v)) => Check::new(
                    "profile_off_axis",
                    -v.abs().max(TIE_TOL),
                    format!("violation at s = {s}"),
                ),
                None => Check::new("profile_off_axis", 1.0, "x(s) >= 0 on [0, L/2]".into()),
            };
            ConditionReport::new(
                Route::Theorem33,
                vec![
                    even_check(c),
                    jacobian_check(c, d.delta()),
                    axis,
                    Check::new(
                        "det_j_positive",
                        pos.0,
                        format!("min det J = {} at r = {}, s = {}", pos.0, pos.1, pos.2),
                    ),
                    Check::new(
                        "det_j_concave",
                        conc.0,
                        format!("tightest slope change at r = {}, s = {}", conc.1, conc.2),
                    ),
                    simple_check(d),
                ],
                vec![("k_min", c.k_min()), ("k_max", c.k_max())],
            )
        }
    }
}
