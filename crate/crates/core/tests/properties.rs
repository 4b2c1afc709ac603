use std::f64::consts::PI;

use proptest::prelude::*;
use tubeig_core::conditions;
use tubeig_core::eigensolve::{default_grid, solve_sl, spectrum_on, EndCondition, Mode, SLProblem};
use tubeig_core::fermi::{Dimension, TubeDomain};
use tubeig_core::geometry::{ArcCurve, Builtin};
use tubeig_core::{Expr, Piece, Piecewise};

/// Reference expression tree, printed fully parenthesized.
#[derive(Debug, Clone)]
enum Ref {
    Num(f64),
    Var,
    Pi,
    Add(Box<Ref>, Box<Ref>),
    Sub(Box<Ref>, Box<Ref>),
    Mul(Box<Ref>, Box<Ref>),
    Div(Box<Ref>, Box<Ref>),
    Square(Box<Ref>),
    Neg(Box<Ref>),
    Sin(Box<Ref>),
    Cos(Box<Ref>),
    Atan(Box<Ref>),
    SqrtAbs(Box<Ref>),
}

impl Ref {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Ref::Num(v) => *v,
            Ref::Var => x,
            Ref::Pi => PI,
            Ref::Add(a, b) => a.eval(x) + b.eval(x),
            Ref::Sub(a, b) => a.eval(x) - b.eval(x),
            Ref::Mul(a, b) => a.eval(x) * b.eval(x),
            Ref::Div(a, b) => a.eval(x) / b.eval(x),
            Ref::Square(a) => a.eval(x).powi(2),
            Ref::Neg(a) => -a.eval(x),
            Ref::Sin(a) => a.eval(x).sin(),
            Ref::Cos(a) => a.eval(x).cos(),
            Ref::Atan(a) => a.eval(x).atan(),
            Ref::SqrtAbs(a) => a.eval(x).abs().sqrt(),
        }
    }

    /// Smallest denominator magnitude met during evaluation.
    fn min_denominator(&self, x: f64) -> f64 {
        match self {
            Ref::Num(_) | Ref::Var | Ref::Pi => f64::INFINITY,
            Ref::Div(a, b) => b.eval(x).abs().min(a.min_denominator(x)).min(b.min_denominator(x)),
            Ref::Add(a, b) | Ref::Sub(a, b) | Ref::Mul(a, b) => a.min_denominator(x).min(b.min_denominator(x)),
            Ref::Square(a) | Ref::Neg(a) | Ref::Sin(a) | Ref::Cos(a) | Ref::Atan(a) | Ref::SqrtAbs(a) => {
                a.min_denominator(x)
            }
        }
    }

    fn text(&self) -> String {
        match self {
            Ref::Num(v) => format!("{v:?}"),
            Ref::Var => "s".into(),
            Ref::Pi => "pi".into(),
            Ref::Add(a, b) => format!("({} + {})", a.text(), b.text()),
            Ref::Sub(a, b) => format!("({} - {})", a.text(), b.text()),
            Ref::Mul(a, b) => format!("({} * {})", a.text(), b.text()),
            Ref::Div(a, b) => format!("({} / {})", a.text(), b.text()),
            Ref::Square(a) => format!("({})^2", a.text()),
            Ref::Neg(a) => format!("(-{})", a.text()),
            Ref::Sin(a) => format!("sin({})", a.text()),
            Ref::Cos(a) => format!("cos({})", a.text()),
            Ref::Atan(a) => format!("atan({})", a.text()),
            Ref::SqrtAbs(a) => format!("sqrt(abs({}))", a.text()),
        }
    }
}

fn ref_tree() -> impl Strategy<Value = Ref> {
    let leaf = prop_oneof![
        (0.25f64..4.0).prop_map(|v| Ref::Num((v * 64.0).round() / 64.0)),
        Just(Ref::Var),
        Just(Ref::Pi),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        let b = |f: fn(Box<Ref>, Box<Ref>) -> Ref| {
            (inner.clone(), inner.clone()).prop_map(move |(a, c)| f(Box::new(a), Box::new(c)))
        };
        let u = |f: fn(Box<Ref>) -> Ref| inner.clone().prop_map(move |a| f(Box::new(a)));
        prop_oneof![
            b(Ref::Add),
            b(Ref::Sub),
            b(Ref::Mul),
            b(Ref::Div),
            u(Ref::Square),
            u(Ref::Neg),
            u(Ref::Sin),
            u(Ref::Cos),
            u(Ref::Atan),
            u(Ref::SqrtAbs),
        ]
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parser_matches_reference(tree in ref_tree(), x in -2.0f64..2.0) {
        prop_assume!(tree.min_denominator(x) > 1e-6);
        let want = tree.eval(x);
        prop_assume!(want.is_finite() && want.abs() < 1e12);
        let got = Expr::parse(&tree.text(), "s").unwrap().eval(x).unwrap();
        prop_assert!(close(got, want), "{} at {x}: {got} vs {want}", tree.text());
    }

    #[test]
    fn printer_round_trips(tree in ref_tree()) {
        let e = Expr::parse(&tree.text(), "s").unwrap();
        let again = Expr::parse(&e.to_string(), "s").unwrap();
        for j in 0..32 {
            let x = -2.0 + 4.0 * j as f64 / 31.0;
            match (e.eval(x), again.eval(x)) {
                (Ok(a), Ok(b)) => prop_assert!(a == b || (a.is_nan() && b.is_nan()), "{e} vs {again} at {x}"),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{e}: {a:?} vs {again}: {b:?}"),
            }
        }
    }
}

/// Signed curvature of the circle through three points.
fn menger(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    let cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    let d = |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    2.0 * cross / (d(p, q) * d(q, r) * d(p, r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Curves built from an even curvature reproduce it geometrically, are
    /// parametrized by arc length and sit in the canonical pose.
    #[test]
    fn curvature_round_trip(c0 in -1.5f64..1.5, c1 in -1.0f64..1.0, len in 1.0f64..3.0) {
        let text = format!("{c0:?} + {c1:?}*cos(2*pi*(s - {:?})/{len:?})", len / 2.0);
        let k = Piecewise::single(Expr::parse(&text, "s").unwrap(), 0.0, len).unwrap();
        let curve = match ArcCurve::from_curvature(k.clone(), len, 1024) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let pts = curve.points();
        let h = len / 1024.0;
        for i in 1..1024 {
            let s = curve.s()[i];
            let want = k.eval(s).unwrap();
            let got = menger(pts[i - 1], pts[i], pts[i + 1]);
            prop_assert!((got - want).abs() < 1e-4, "s = {s}: {got} vs {want}");
            let chord = ((pts[i + 1][0] - pts[i][0]).powi(2) + (pts[i + 1][1] - pts[i][1]).powi(2)).sqrt();
            // A chord of a curve with |k| ≤ 2.5 is shorter than the arc by at
            // most k²h³/24.
            prop_assert!(chord <= h * (1.0 + 1e-12) && h - chord <= 6.25 * h.powi(3) / 24.0 + 1e-14);
        }
        let mid = pts[512];
        prop_assert!(mid[0].abs() < 1e-12 && mid[1].abs() < 1e-12);
        let t = curve.tangent(512);
        prop_assert!((t[0] + 1.0).abs() < 1e-12 && t[1].abs() < 1e-12);
        // Reflection symmetry about the y-axis.
        for i in 0..=1024 {
            let (a, b) = (pts[i], pts[1024 - i]);
            prop_assert!((a[0] + b[0]).abs() < 1e-10 && (a[1] - b[1]).abs() < 1e-10);
        }
    }
}

/// Random concave, even, piecewise-linear weight on `[0, len]`, positive
/// inside, with kinks returned as breakpoints.
fn concave_even_weight(slopes: &[f64], base: f64, len: f64) -> (Vec<(f64, f64)>, Vec<f64>) {
    let half = len / 2.0;
    let n = slopes.len();
    let mut sorted = slopes.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    // Non-negative slopes on the left half keep the mirrored weight concave.
    let mut knots = vec![(0.0, base)];
    for (j, m) in sorted.iter().enumerate() {
        let (x0, y0) = knots[j];
        let x1 = half * (j + 1) as f64 / n as f64;
        knots.push((x1, y0 + m.abs() * (x1 - x0)));
    }
    let breaks = knots[1..]
        .iter()
        .map(|k| k.0)
        .chain(knots[..n].iter().rev().map(|k| len - k.0))
        .collect();
    (knots, breaks)
}

fn interpolate(knots: &[(f64, f64)], x: f64) -> f64 {
    for w in knots.windows(2) {
        if x <= w[1].0 {
            let t = (x - w[0].0) / (w[1].0 - w[0].0);
            return w[0].1 + t * (w[1].1 - w[0].1);
        }
    }
    knots[knots.len() - 1].1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// Weighted Neumann problem `-(pu')' = μpu` with concave even `p ≥ 0`.
    #[test]
    fn payne_weinberger_weights(
        slopes in proptest::collection::vec(0.01f64..3.0, 1..5),
        base in 0.0f64..1.0,
        len in 0.5f64..3.0,
    ) {
        let (knots, breaks) = concave_even_weight(&slopes, base, len);
        let half = len / 2.0;
        let p = move |x: f64| interpolate(&knots, if x <= half { x } else { len - x });
        let pr = SLProblem::new(0.0, len, p.clone(), p, EndCondition::Neumann, EndCondition::Neumann)
            .with_breakpoints(breaks);
        let mu = solve_sl(&pr, 512, 1).unwrap().values[0];
        let bound = PI * PI / (len * len);
        prop_assert!(mu >= bound * (1.0 - 1e-6), "{mu} < {bound}");
    }

    /// Half-interval problem with a concave weight vanishing at `L/2`. The
    /// point condition there has zero weighted capacity, so the admissible
    /// class is `v'(0) = 0` with `v' p^{1/2} → 0` at `L/2`: the nontrivial
    /// modes of the weighted Neumann problem on `[0, L/2]`.
    #[test]
    fn weight_vanishing_at_half_length(
        slopes in proptest::collection::vec(0.05f64..3.0, 1..5),
        len in 0.5f64..3.0,
    ) {
        let half = len / 2.0;
        let n = slopes.len();
        let mut sorted = slopes.clone();
        // Steepest piece next to L/2 keeps p concave, with p(L/2) = 0.
        sorted.sort_by(|a, b| b.total_cmp(a));
        let mut knots = vec![(half, 0.0)];
        for (j, m) in sorted.iter().enumerate() {
            let (x0, y0) = knots[j];
            let x1 = half - half * (j + 1) as f64 / n as f64;
            knots.push((x1, y0 + m * (x0 - x1)));
        }
        knots.reverse();
        let breaks: Vec<f64> = knots[1..n].iter().map(|k| k.0).collect();
        let p = move |x: f64| interpolate(&knots, x);
        let pr = SLProblem::new(0.0, half, p.clone(), p, EndCondition::Neumann, EndCondition::Neumann)
            .with_breakpoints(breaks);
        let mu = solve_sl(&pr, 512, 1).unwrap().values[0];
        let bound = 4.0 * PI * PI / (len * len);
        prop_assert!(mu >= bound * (1.0 - 1e-6), "{mu} < {bound}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Conforming elements on nested grids give non-increasing eigenvalues.
    #[test]
    fn nested_grid_monotonicity(radius in 0.8f64..3.0, alpha in 0.2f64..1.2, frac in 0.05f64..0.3) {
        let arc = Builtin::CircularArc { radius, half_angle: alpha }.build(512).unwrap();
        let d = TubeDomain::build(arc, frac * radius, Dimension::Planar).unwrap();
        for mode in [Mode::Full, Mode::Odd] {
            let g = default_grid(&d, 32, 4, mode);
            let coarse = spectrum_on(&d, &g, mode, 0, 3, false).unwrap();
            let fine = spectrum_on(&d, &g.refined(), mode, 0, 3, false).unwrap();
            for (c, f) in coarse.values.iter().zip(&fine.values) {
                prop_assert!(*f <= c + 1e-12, "{mode:?}: {f} > {c}");
            }
        }
    }

    /// `Q(δ)` has no jumps on the admissible range.
    #[test]
    fn q_is_continuous(t in 0.01f64..0.95) {
        let m = Builtin::Moustache.build(2048).unwrap();
        let limit = conditions::admissibility_limit(&m);
        let delta = t * limit;
        let eps = 1e-7;
        let q0 = conditions::q_of_delta(&m, delta).unwrap();
        let q1 = conditions::q_of_delta(&m, delta + eps).unwrap();
        let q2 = conditions::q_of_delta(&m, delta + 2.0 * eps).unwrap();
        // Equal steps change Q by comparable, small amounts.
        let (d1, d2) = ((q1 - q0).abs(), (q2 - q1).abs());
        prop_assert!(d1 < 1e-3 && d2 < 1e-3, "{q0} {q1} {q2}");
        prop_assert!(d1 <= 2.0 * d2 + 1e-12 && d2 <= 2.0 * d1 + 1e-12, "{q0} {q1} {q2}");
    }
}

#[test]
fn piecewise_curvature_meets_breakpoints() {
    let k = Piecewise::new(vec![
        Piece {
            lo: 0.0,
            hi: 0.5,
            expr: Expr::parse("1", "s").unwrap(),
        },
        Piece {
            lo: 0.5,
            hi: 1.5,
            expr: Expr::parse("-1", "s").unwrap(),
        },
        Piece {
            lo: 1.5,
            hi: 2.0,
            expr: Expr::parse("1", "s").unwrap(),
        },
    ])
    .unwrap();
    let c = ArcCurve::from_curvature(k, 2.0, 256).unwrap();
    assert!(c.s().contains(&0.5) && c.s().contains(&1.5));
    assert_eq!(c.k_max(), 1.0);
    assert_eq!(c.k_min(), -1.0);
}

/// Imposing `v(L/2) = 0` where the weight vanishes linearly does not define
/// a closed condition: the discrete Dirichlet eigenvalue keeps falling under
/// refinement, far below the bound, while the natural problem converges.
#[test]
fn dirichlet_point_at_degenerate_end_loses_capacity() {
    let len = 0.5;
    let solve = |right, n| {
        let pr = SLProblem::new(0.0, len / 2.0, |x| 0.25 - x, |x| 0.25 - x, EndCondition::Neumann, right);
        solve_sl(&pr, n, 1).unwrap().values[0]
    };
    let (coarse, fine) = (solve(EndCondition::Dirichlet, 64), solve(EndCondition::Dirichlet, 512));
    assert!(fine < coarse && fine < 4.0 * PI * PI / (len * len));
    // Natural condition: (j₁,₁ / (L/2))² with j₁,₁ the first zero of J₁.
    let exact = (3.831705970207512f64 / 0.25).powi(2);
    let natural = solve(EndCondition::Neumann, 512);
    assert!((natural - exact).abs() < 1e-3 * exact, "{natural} vs {exact}");
}
