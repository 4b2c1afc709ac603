//! `tubeig`: hypothesis checks, lower bounds, eigenvalue verification,
//! parameter sweeps and renderings for tube domains described by JSON spec
//! files.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod json;
mod report;
mod spec;
mod svg;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tubeig_core::bounds;
use tubeig_core::conditions;
use tubeig_core::eigensolve::{self, VerifyMode, VerifyOptions};
use tubeig_core::fermi::Dimension;

use json::Json;
use spec::SpecFile;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("{0}")]
    Usage(String),
    #[error("invalid domain: {0}")]
    Domain(#[from] tubeig_core::Error),
    #[error("solver failure: {0}")]
    Solver(tubeig_core::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Solver(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "tubeig", version, about = "Neumann eigenvalue lower bounds for tube domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Odd,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the geometric hypotheses.
    Check { spec: PathBuf },
    /// Print the lower bound and the hypotheses it rests on.
    Bound { spec: PathBuf },
    /// Compute eigenvalues and compare them with the bound.
    Verify {
        spec: PathBuf,
        /// Grid as NSxNR; half-length problems use NS/2 intervals in s.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
        #[arg(long, value_enum, default_value = "both")]
        mode: ModeArg,
        /// Number of eigenvalues per problem.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// CSV of Q(δ), hypothesis status and bound over equally spaced δ.
    Sweep {
        spec: PathBuf,
        #[arg(long = "delta-min")]
        delta_min: f64,
        #[arg(long = "delta-max")]
        delta_max: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Draw a planar domain as SVG.
    Render {
        spec: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NSxNR, got `{text}`"))?;
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"));
    let (ns, nr) = (parse(a)?, parse(b)?);
    if ns < 2 || nr < 1 {
        return Err("grid needs NS >= 2 and NR >= 1".into());
    }
    Ok((ns, nr))
}

fn threads() -> Result<Option<usize>, CliError> {
    match std::env::var("TUBEIG_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "TUBEIG_THREADS must be a positive integer, got `{v}`"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Output text and exit status of a successful command.
struct Outcome {
    text: String,
    code: u8,
    file: Option<PathBuf>,
}

fn run(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Check { spec } => {
            let spec = SpecFile::load(&spec)?;
            let d = spec.domain()?;
            let conds = conditions::check_3d(&d);
            let mut fields = report::header("check", &spec, &d);
            fields.push(("conditions".into(), report::conditions(&conds)));
            if d.dimension() == Dimension::Planar {
                fields.push(("prop31".into(), report::conditions(&conditions::check_prop31(&d))));
                fields.push(("prop32".into(), report::conditions(&conditions::check_prop32(&d))));
            }
            fields.push(("satisfied".into(), Json::Bool(conds.overall)));
            Ok(Outcome {
                text: Json::Obj(fields).render(),
                code: if conds.overall { 0 } else { 1 },
                file: None,
            })
        }
        Command::Bound { spec } => {
            let spec = SpecFile::load(&spec)?;
            let d = spec.domain()?;
            let b = bounds::lower_bound(&d);
            let mut fields = report::header("bound", &spec, &d);
            fields.push(("conditions".into(), report::conditions(&b.conditions)));
            fields.push(("bound".into(), report::bound(&b)));
            fields.push(("satisfied".into(), Json::Bool(b.conditions.overall)));
            Ok(Outcome {
                text: Json::Obj(fields).render(),
                code: if b.conditions.overall { 0 } else { 1 },
                file: None,
            })
        }
        Command::Verify {
            spec,
            grid,
            mode,
            count,
        } => {
            let spec = SpecFile::load(&spec)?;
            let d = spec.domain()?;
            let (n_s, n_r) = grid
                .or(spec.grid.map(|g| (g.n_s, g.n_r)))
                .unwrap_or((eigensolve::DEFAULT_NS, eigensolve::DEFAULT_NR));
            let mode = match mode {
                ModeArg::Full => VerifyMode::Full,
                ModeArg::Odd => VerifyMode::Odd,
                ModeArg::Both => VerifyMode::Both,
            };
            if count < 1 {
                return Err(CliError::Usage("count must be at least 1".into()));
            }
            let opts = VerifyOptions {
                n_s,
                n_r,
                mode,
                count,
                refine: true,
            };
            let v = eigensolve::verify_bound(&d, &opts).map_err(CliError::Solver)?;
            let satisfied = v.satisfied.unwrap_or(false);
            let mut fields = report::header("verify", &spec, &d);
            fields.push(("conditions".into(), report::conditions(&v.bound.conditions)));
            fields.push(("bound".into(), report::bound(&v.bound)));
            fields.push(("eig".into(), report::verification(&v)));
            fields.push(("equality_gap".into(), Json::opt_num(v.equality_gap)));
            fields.push(("satisfied".into(), Json::Bool(satisfied)));
            Ok(Outcome {
                text: Json::Obj(fields).render(),
                code: if satisfied { 0 } else { 1 },
                file: None,
            })
        }
        Command::Sweep {
            spec,
            delta_min,
            delta_max,
            steps,
        } => {
            let deltas = sweep::deltas(delta_min, delta_max, steps)?;
            let threads = threads()?;
            let spec = SpecFile::load(&spec)?;
            let curve = spec.curve()?;
            Ok(Outcome {
                text: sweep::sweep(&curve, spec.dimension(), &deltas, threads)?,
                code: 0,
                file: None,
            })
        }
        Command::Render { spec, output } => {
            let spec = SpecFile::load(&spec)?;
            if spec.dimension() != Dimension::Planar {
                return Err(CliError::Usage("render needs a planar domain".into()));
            }
            let d = spec.domain()?;
            let r = svg::render(&d);
            eprintln!("render: {} boundary nodes", r.boundary_nodes);
            Ok(Outcome {
                text: r.svg,
                code: 0,
                file: output,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            match out.file {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, &out.text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{}", out.text),
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
