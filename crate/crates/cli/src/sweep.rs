//! CSV sweep of `Q(δ)`, the hypothesis check and the bound over `δ`.

use rayon::prelude::*;
use tubeig_core::bounds;
use tubeig_core::conditions;
use tubeig_core::fermi::{self, Dimension, TubeDomain};
use tubeig_core::geometry::ArcCurve;

use crate::json::number;
use crate::CliError;

pub const HEADER: &str = "delta,Q,conditions_pass,bound";

/// `steps` equally spaced values from `lo` to `hi` inclusive.
pub fn deltas(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(CliError::Usage("sweep needs 0 < delta-min < delta-max".into()));
    }
    if steps < 2 {
        return Err(CliError::Usage("sweep needs steps >= 2".into()));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * (i as f64 / last)
            }
        })
        .collect())
}

fn num(v: f64) -> String {
    number(v).unwrap_or_default()
}

fn row(curve: &ArcCurve, dimension: Dimension, delta: f64) -> Result<String, CliError> {
    let (min_factor, _) = fermi::min_jacobian_factor(curve, delta);
    if !(min_factor > 0.0) {
        return Ok(format!("{},,false,", num(delta)));
    }
    let q = conditions::q_of_delta(curve, delta).map(num).unwrap_or_default();
    let d = TubeDomain::unchecked(curve.clone(), delta, dimension)?;
    let b = bounds::lower_bound(&d);
    Ok(format!("{},{q},{},{}", num(delta), b.conditions.overall, num(b.bound)))
}

/// CSV text with header; rows are computed in parallel and emitted in `δ`
/// order.
pub fn sweep(
    curve: &ArcCurve,
    dimension: Dimension,
    deltas: &[f64],
    threads: Option<usize>,
) -> Result<String, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let rows: Vec<String> = pool.install(|| {
        deltas
            .par_iter()
            .map(|&d| row(curve, dimension, d))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}
