//! Spec-file schema and domain construction.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use tubeig_core::fermi::{Dimension, TubeDomain};
use tubeig_core::geometry::{ArcCurve, Builtin, DEFAULT_INTERVALS, MIN_INTERVALS};
use tubeig_core::{Expr, Piece, Piecewise};

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub curve: CurveSpec,
    pub delta: f64,
    pub dimension: DimensionSpec,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveSpec {
    Parametric {
        x: String,
        y: String,
        t_range: [f64; 2],
    },
    Curvature {
        k: CurvatureSpec,
        length: f64,
    },
    Builtin {
        name: String,
        #[serde(default)]
        params: BTreeMap<String, f64>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CurvatureSpec {
    Single(String),
    Pieces(Vec<PieceSpec>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub lo: f64,
    pub hi: f64,
    pub expr: String,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DimensionSpec {
    Planar,
    Cylinder {
        #[serde(rename = "T")]
        height: f64,
    },
    Revolution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_s: usize,
    pub n_r: usize,
}

impl SpecFile {
    pub fn load(path: &Path) -> Result<SpecFile, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        SpecFile::parse(&text)
    }

    pub fn parse(text: &str) -> Result<SpecFile, CliError> {
        let spec: SpecFile = serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |what: &str| Err(CliError::Spec(what.to_string()));
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return bad("delta must be a positive finite number");
        }
        if let DimensionSpec::Cylinder { height } = self.dimension {
            if !(height.is_finite() && height > 0.0) {
                return bad("cylinder height T must be positive and finite");
            }
        }
        if let Some(g) = self.grid {
            if g.n_s < 2 || g.n_r < 1 {
                return bad("grid needs n_s >= 2 and n_r >= 1");
            }
        }
        if let Some(n) = self.samples {
            if n < MIN_INTERVALS {
                return Err(CliError::Spec(format!("samples must be at least {MIN_INTERVALS}")));
            }
        }
        Ok(())
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_INTERVALS)
    }

    pub fn dimension(&self) -> Dimension {
        match self.dimension {
            DimensionSpec::Planar => Dimension::Planar,
            DimensionSpec::Cylinder { height } => Dimension::Cylinder { height },
            DimensionSpec::Revolution => Dimension::Revolution,
        }
    }

    pub fn curve(&self) -> Result<ArcCurve, CliError> {
        self.curve.build(self.samples())
    }

    /// Domain without rejecting failed hypotheses, so that they can be
    /// reported.
    pub fn domain(&self) -> Result<TubeDomain, CliError> {
        self.domain_with_delta(self.delta)
    }

    pub fn domain_with_delta(&self, delta: f64) -> Result<TubeDomain, CliError> {
        Ok(TubeDomain::unchecked(self.curve()?, delta, self.dimension())?)
    }
}

fn param(params: &BTreeMap<String, f64>, names: &[&str]) -> Result<f64, CliError> {
    names
        .iter()
        .find_map(|n| params.get(*n).copied())
        .ok_or_else(|| CliError::Spec(format!("builtin curve needs parameter `{}`", names[0])))
}

impl CurveSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            CurveSpec::Parametric { .. } => "parametric",
            CurveSpec::Curvature { .. } => "curvature",
            CurveSpec::Builtin { .. } => "builtin",
        }
    }

    pub fn builtin(&self) -> Result<Option<Builtin>, CliError> {
        let CurveSpec::Builtin { name, params } = self else {
            return Ok(None);
        };
        let b = match name.as_str() {
            "segment" => Builtin::Segment {
                length: param(params, &["L", "length"])?,
            },
            "circular_arc" => Builtin::CircularArc {
                radius: param(params, &["R", "radius"])?,
                half_angle: param(params, &["alpha", "half_angle"])?,
            },
            "catenary" => Builtin::Catenary {
                a: param(params, &["a"])?,
            },
            "moustache" => Builtin::Moustache,
            other => return Err(CliError::Spec(format!("unknown builtin curve `{other}`"))),
        };
        b.validate()?;
        Ok(Some(b))
    }

    pub fn build(&self, n: usize) -> Result<ArcCurve, CliError> {
        Ok(match self {
            CurveSpec::Parametric { x, y, t_range } => {
                ArcCurve::from_parametric(&Expr::parse(x, "t")?, &Expr::parse(y, "t")?, *t_range, n)?
            }
            CurveSpec::Curvature { k, length } => {
                let pieces = match k {
                    CurvatureSpec::Single(text) => Piecewise::single(Expr::parse(text, "s")?, 0.0, *length)?,
                    CurvatureSpec::Pieces(list) => Piecewise::new(
                        list.iter()
                            .map(|p| {
                                Ok(Piece {
                                    lo: p.lo,
                                    hi: p.hi,
                                    expr: Expr::parse(&p.expr, "s")?,
                                })
                            })
                            .collect::<Result<Vec<_>, CliError>>()?,
                    )?,
                };
                ArcCurve::from_curvature(pieces, *length, n)?
            }
            CurveSpec::Builtin { .. } => self.builtin()?.expect("builtin spec").build(n)?,
        })
    }
}
