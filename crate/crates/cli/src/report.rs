//! JSON views of core results.

use tubeig_core::bounds::BoundResult;
use tubeig_core::conditions::{Check, ConditionReport};
use tubeig_core::eigensolve::{EigResult, Verification};
use tubeig_core::fermi::{Dimension, TubeDomain};

use crate::json::Json;
use crate::spec::SpecFile;

fn check(c: &Check) -> Json {
    Json::obj([
        ("name", Json::str(c.name)),
        ("pass", Json::Bool(c.pass)),
        ("margin", Json::Num(c.margin)),
        ("detail", Json::str(c.detail.clone())),
    ])
}

pub fn conditions(r: &ConditionReport) -> Json {
    Json::obj([
        ("route", Json::str(r.route.name())),
        ("overall", Json::Bool(r.overall)),
        ("applicable", Json::Bool(r.applicable)),
        ("checks", Json::Arr(r.checks.iter().map(check).collect())),
        (
            "quantities",
            Json::obj(r.quantities.iter().map(|&(k, v)| (k, Json::Num(v)))),
        ),
    ])
}

pub fn bound(b: &BoundResult) -> Json {
    Json::obj([
        ("B", Json::Num(b.b)),
        ("L", Json::Num(b.length)),
        ("bound", Json::Num(b.bound)),
        ("theorem", Json::str(b.theorem.name())),
        ("advisory", Json::Bool(b.advisory)),
    ])
}

pub fn eig(e: &EigResult) -> Json {
    Json::obj([
        ("values", Json::nums(&e.values)),
        ("residuals", Json::nums(&e.residuals)),
        ("backward_errors", Json::nums(&e.backward_errors)),
        (
            "grid",
            Json::Arr(vec![Json::Int(e.n_s as i64), Json::Int(e.n_r as i64)]),
        ),
        ("iterations", Json::Int(e.iterations as i64)),
        ("refined_estimate", Json::opt_num(e.refined_estimate)),
    ])
}

fn dimension(d: Dimension) -> Json {
    match d {
        Dimension::Cylinder { height } => Json::obj([("kind", Json::str(d.name())), ("T", Json::Num(height))]),
        _ => Json::obj([("kind", Json::str(d.name()))]),
    }
}

/// Fields common to every report.
pub fn header(command: &str, spec: &SpecFile, d: &TubeDomain) -> Vec<(String, Json)> {
    vec![
        ("command".into(), Json::str(command)),
        ("curve".into(), Json::str(spec.curve.kind())),
        ("samples".into(), Json::Int(spec.samples() as i64)),
        ("length".into(), Json::Num(d.length())),
        ("delta".into(), Json::Num(d.delta())),
        ("dimension".into(), dimension(d.dimension())),
    ]
}

pub fn verification(v: &Verification) -> Json {
    Json::obj([
        ("full", v.full.as_ref().map_or(Json::Null, eig)),
        ("odd", v.odd.as_ref().map_or(Json::Null, eig)),
        ("mu1", Json::opt_num(v.mu1)),
        ("mu1_odd", Json::opt_num(v.mu1_odd)),
        ("equality_gap", Json::opt_num(v.equality_gap)),
    ])
}
