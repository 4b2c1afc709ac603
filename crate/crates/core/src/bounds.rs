//! The constant `B`, the lower bound `B π² / L²`, and the closed forms of
//! the worked examples.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::conditions::{self, ConditionReport, Route};
use crate::error::{Error, Result};
use crate::fermi::{self, TubeDomain};
use crate::geometry::ArcCurve;

/// `B = min_{r ∈ [0,δ], s} 1/(1 + rk(s))²`. Since `r ↦ 1 + rk` is monotone
/// the minimum sits at `r = 0` or `r = δ`.
pub fn constant_b(curve: &ArcCurve, delta: f64) -> Result<f64> {
    let (min_factor, _) = fermi::min_jacobian_factor(curve, delta);
    if !(min_factor > 0.0) {
        return Err(Error::InadmissibleDelta { delta, min_factor });
    }
    Ok(b_formula(curve, delta))
}

fn b_formula(curve: &ArcCurve, delta: f64) -> f64 {
    let grow = 1.0 + delta * curve.k_max().max(0.0);
    1.0 / (grow * grow)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub b: f64,
    pub length: f64,
    pub bound: f64,
    pub theorem: Route,
    pub conditions: ConditionReport,
    /// Set when the hypotheses fail and the number is not a theorem.
    pub advisory: bool,
}

/// `B π² / L²` with `L` the full profile length, together with the
/// hypothesis report of the theorem matching the domain's dimension.
pub fn lower_bound(d: &TubeDomain) -> BoundResult {
    let conditions = conditions::check_3d(d);
    let b = b_formula(d.curve(), d.delta());
    let length = d.length();
    BoundResult {
        b,
        length,
        bound: b * PI * PI / (length * length),
        theorem: conditions.route,
        advisory: !conditions.overall,
        conditions,
    }
}

/// Closed-form quantities from the worked examples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// `(2Rδ + δ²) ln((R+δ)/R)`.
    SectorLhs { radius: f64, delta: f64 },
    /// `2α²R²/π²`.
    SectorRhs { radius: f64, half_angle: f64 },
    /// `π² / (4α²(R+δ)²)`.
    SectorBound { radius: f64, half_angle: f64, delta: f64 },
    /// `π² / (4(1+δ)² sinh² a)`.
    CatenaryBound { a: f64, delta: f64 },
    /// `π² / (2.56 (1+5δ)²)`.
    MoustacheBound { delta: f64 },
    /// `1 / (4(δ+R)²)`.
    ShellBound { radius: f64, delta: f64 },
}

impl ClosedForm {
    /// Looks up a closed form by name with parameters `R`, `alpha`, `a`,
    /// `delta` as needed.
    pub fn from_name(name: &str, params: &BTreeMap<String, f64>) -> Result<ClosedForm> {
        let get = |key: &str| {
            params
                .get(key)
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("closed form `{name}` needs parameter `{key}`")))
        };
        Ok(match name {
            "sector_lhs" => ClosedForm::SectorLhs {
                radius: get("R")?,
                delta: get("delta")?,
            },
            "sector_rhs" => ClosedForm::SectorRhs {
                radius: get("R")?,
                half_angle: get("alpha")?,
            },
            "sector_bound" => ClosedForm::SectorBound {
                radius: get("R")?,
                half_angle: get("alpha")?,
                delta: get("delta")?,
            },
            "catenary_bound" => ClosedForm::CatenaryBound {
                a: get("a")?,
                delta: get("delta")?,
            },
            "moustache_bound" => ClosedForm::MoustacheBound { delta: get("delta")? },
            "shell_bound" => ClosedForm::ShellBound {
                radius: get("R")?,
                delta: get("delta")?,
            },
            other => return Err(Error::UnknownClosedForm(other.to_string())),
        })
    }

    pub fn value(&self) -> f64 {
        match *self {
            ClosedForm::SectorLhs { radius, delta } => {
                (2.0 * radius * delta + delta * delta) * (delta / radius).ln_1p()
            }
            ClosedForm::SectorRhs { radius, half_angle } => 2.0 * (half_angle * radius).powi(2) / (PI * PI),
            ClosedForm::SectorBound {
                radius,
                half_angle,
                delta,
            } => PI * PI / (4.0 * half_angle * half_angle * (radius + delta).powi(2)),
            ClosedForm::CatenaryBound { a, delta } => PI * PI / (4.0 * (1.0 + delta).powi(2) * a.sinh().powi(2)),
            ClosedForm::MoustacheBound { delta } => PI * PI / (2.56 * (1.0 + 5.0 * delta).powi(2)),
            ClosedForm::ShellBound { radius, delta } => 1.0 / (4.0 * (delta + radius).powi(2)),
        }
    }
}

/// Evaluates a named closed form.
pub fn example_closed_form(name: &str, params: &BTreeMap<String, f64>) -> Result<f64> {
    Ok(ClosedForm::from_name(name, params)?.value())
}
