//! Finite-element Neumann eigenvalues of tubular domains and of weighted
//! Sturm–Liouville problems.

pub mod band;
pub mod fem2d;
pub mod pencil;
pub mod sl;

use std::f64::consts::PI;

pub use band::{BandCholesky, BandMatrix};
pub use fem2d::{assemble_2d, assemble_on, default_grid, FermiGrid, Mode, OperatorPair};
pub use pencil::{smallest_eigenpairs, Eigenpairs};
pub use sl::{solve_sl, solve_sl_on, EndCondition, SLProblem};

use crate::bounds::{self, BoundResult};
use crate::error::{Error, Result};
use crate::fermi::{Dimension, TubeDomain};
use crate::quad;

pub const DEFAULT_NS: usize = 256;
pub const DEFAULT_NR: usize = 16;
/// Relative slack when comparing an eigenvalue with the bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Nodes on `[a, b]`: about `n` intervals, with every interior breakpoint a
/// node and equal spacing between consecutive breakpoints.
pub fn aligned_nodes(a: f64, b: f64, n: usize, breakpoints: &[f64]) -> Vec<f64> {
    let pieces = quad::split_at(a, b, breakpoints);
    let n = n.max(pieces.len());
    let len = b - a;
    let ideal: Vec<f64> = pieces.iter().map(|(x, y)| n as f64 * (y - x) / len).collect();
    let mut counts: Vec<usize> = ideal.iter().map(|v| (v.floor() as usize).max(1)).collect();
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&i, &j| (ideal[j] - ideal[j].floor()).total_cmp(&(ideal[i] - ideal[i].floor())));
    let mut k = 0;
    while counts.iter().sum::<usize>() < n {
        counts[order[k % order.len()]] += 1;
        k += 1;
    }
    let mut nodes = vec![a];
    for (&(x, y), &c) in pieces.iter().zip(&counts) {
        nodes.extend((1..c).map(|i| x + (y - x) * (i as f64 / c as f64)));
        nodes.push(y);
    }
    nodes
}

/// Shift below the spectrum for a domain of extent `ell`.
pub fn shift_for(ell: f64) -> f64 {
    -0.1 * (PI / ell).powi(2)
}

/// Eigenvalues of one discretized problem.
#[derive(Debug, Clone, PartialEq)]
pub struct EigResult {
    pub values: Vec<f64>,
    pub residuals: Vec<f64>,
    pub backward_errors: Vec<f64>,
    pub n_s: usize,
    pub n_r: usize,
    pub iterations: usize,
    /// Richardson value `(4μ_{h/2} − μ_h)/3` for the first eigenvalue.
    pub refined_estimate: Option<f64>,
}

/// Solves an assembled problem for its `count` smallest eigenvalues
/// (constants excluded for pure Neumann problems).
pub fn solve_pair(op: &OperatorPair, count: usize) -> Result<EigResult> {
    let ell = (op.grid.s[op.grid.n_s()] - op.grid.s[0]).max(op.grid.r[op.grid.n_r()]);
    let res = smallest_eigenpairs(
        &op.stiffness,
        &op.mass,
        count,
        op.null_vector.as_deref(),
        shift_for(ell),
    )?;
    Ok(EigResult {
        values: res.values,
        residuals: res.residuals,
        backward_errors: res.backward_errors,
        n_s: op.grid.n_s(),
        n_r: op.grid.n_r(),
        iterations: res.iterations,
        refined_estimate: None,
    })
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Spectrum of the planar cross-section operator (or revolution Fourier
/// mode) on a grid, optionally with the Richardson estimate from the nested
/// refined grid.
pub fn spectrum_on(
    d: &TubeDomain,
    grid: &FermiGrid,
    mode: Mode,
    fourier_m: u32,
    count: usize,
    refine: bool,
) -> Result<EigResult> {
    let mut res = solve_pair(&assemble_on(d, grid, mode, fourier_m)?, count)?;
    if refine {
        let fine = solve_pair(&assemble_on(d, &grid.refined(), mode, fourier_m)?, 1)?;
        res.refined_estimate = Some(richardson(res.values[0], fine.values[0]));
    }
    Ok(res)
}

/// Cylinder spectrum: cross-section values `μ_j` combined with `n²π²/T²`,
/// excluding the constant mode.
pub fn cylinder_spectrum(planar: &EigResult, height: f64, count: usize) -> EigResult {
    let axial = |n: usize| (n as f64 * PI / height).powi(2);
    let mut cross = vec![(0.0, 0.0)];
    cross.extend(planar.values.iter().zip(&planar.residuals).map(|(&v, &r)| (v, r)));
    let mut all: Vec<(f64, f64)> = Vec::new();
    for &(mu, res) in &cross {
        for n in 0..=count {
            if mu == 0.0 && n == 0 {
                continue;
            }
            all.push((mu + axial(n), res));
        }
    }
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    all.truncate(count);
    EigResult {
        values: all.iter().map(|v| v.0).collect(),
        residuals: all.iter().map(|v| v.1).collect(),
        backward_errors: vec![0.0; all.len()],
        n_s: planar.n_s,
        n_r: planar.n_r,
        iterations: planar.iterations,
        refined_estimate: planar.refined_estimate.map(|v| v.min(axial(1))),
    }
}

/// Which symmetry classes to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Full,
    Odd,
    Both,
}

impl VerifyMode {
    fn full(self) -> bool {
        self != VerifyMode::Odd
    }

    fn odd(self) -> bool {
        self != VerifyMode::Full
    }
}

/// Numerical check of the lower bound against the computed first nontrivial
/// eigenvalue of the whole domain and of its odd part.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub bound: BoundResult,
    pub full: Option<EigResult>,
    pub odd: Option<EigResult>,
    pub mu1: Option<f64>,
    pub mu1_odd: Option<f64>,
    /// `μ₁^odd ≥ bound` up to [`BOUND_SLACK`], or `μ₁ ≥ bound` when only the
    /// full spectrum was computed.
    pub satisfied: Option<bool>,
    /// `|μ₁ − μ₁^odd| / μ₁`.
    pub equality_gap: Option<f64>,
}

/// Grid and solver options for [`verify_bound`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub n_s: usize,
    pub n_r: usize,
    pub mode: VerifyMode,
    pub count: usize,
    pub refine: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_s: DEFAULT_NS,
            n_r: DEFAULT_NR,
            mode: VerifyMode::Both,
            count: 1,
            refine: true,
        }
    }
}

/// Computes the bound and the eigenvalues it is compared with. Planar
/// domains use the full and odd cross-section problems, cylinders combine
/// them with the axial modes, and revolution domains use the Fourier modes
/// `m = 0` (full) and `m = 1` (odd about the symmetry plane).
pub fn verify_bound(d: &TubeDomain, opts: &VerifyOptions) -> Result<Verification> {
    if opts.n_s < 2 || opts.n_r < 1 || opts.count < 1 {
        return Err(Error::InvalidParameter(
            "grid needs n_s >= 2, n_r >= 1 and count >= 1".into(),
        ));
    }
    let bound = bounds::lower_bound(d);
    let (full, odd) = match d.dimension() {
        Dimension::Planar | Dimension::Cylinder { .. } => {
            let full = if opts.mode.full() {
                let g = default_grid(d, opts.n_s, opts.n_r, Mode::Full);
                Some(spectrum_on(d, &g, Mode::Full, 0, opts.count, opts.refine)?)
            } else {
                None
            };
            let odd = if opts.mode.odd() {
                let g = default_grid(d, opts.n_s, opts.n_r, Mode::Odd);
                Some(spectrum_on(d, &g, Mode::Odd, 0, opts.count, opts.refine)?)
            } else {
                None
            };
            match d.dimension() {
                Dimension::Cylinder { height } => (full.map(|f| cylinder_spectrum(&f, height, opts.count)), odd),
                _ => (full, odd),
            }
        }
        Dimension::Revolution => {
            let g = default_grid(d, opts.n_s, opts.n_r, Mode::Full);
            let odd = spectrum_on(d, &g, Mode::Full, 1, opts.count, opts.refine)?;
            let full = if opts.mode.full() {
                let zero = spectrum_on(d, &g, Mode::Full, 0, opts.count, opts.refine)?;
                Some(merge(&zero, &odd, opts.count))
            } else {
                None
            };
            (full, opts.mode.odd().then_some(odd))
        }
    };
    let mu1 = full.as_ref().map(|r| r.values[0]);
    let mu1_odd = odd.as_ref().map(|r| r.values[0]);
    let satisfied = mu1_odd.or(mu1).map(|mu| mu >= bound.bound * (1.0 - BOUND_SLACK));
    let equality_gap = mu1.zip(mu1_odd).map(|(a, b)| (a - b).abs() / a);
    Ok(Verification {
        bound,
        full,
        odd,
        mu1,
        mu1_odd,
        satisfied,
        equality_gap,
    })
}

/// Union of two spectra, the `count` smallest values.
fn merge(a: &EigResult, b: &EigResult, count: usize) -> EigResult {
    let mut all: Vec<(f64, f64, f64)> = a
        .values
        .iter()
        .zip(&a.residuals)
        .zip(&a.backward_errors)
        .chain(b.values.iter().zip(&b.residuals).zip(&b.backward_errors))
        .map(|((&v, &r), &e)| (v, r, e))
        .collect();
    all.sort_by(|x, y| x.0.total_cmp(&y.0));
    all.truncate(count);
    let refined = match (a.refined_estimate, b.refined_estimate) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    EigResult {
        values: all.iter().map(|v| v.0).collect(),
        residuals: all.iter().map(|v| v.1).collect(),
        backward_errors: all.iter().map(|v| v.2).collect(),
        n_s: a.n_s,
        n_r: a.n_r,
        iterations: a.iterations.max(b.iterations),
        refined_estimate: refined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Builtin;

    fn segment(len: f64, delta: f64, dim: Dimension) -> TubeDomain {
        TubeDomain::build(Builtin::Segment { length: len }.build(256).unwrap(), delta, dim).unwrap()
    }

    #[test]
    fn aligned_nodes_hit_breakpoints() {
        let nodes = aligned_nodes(0.0, 1.6, 256, &[0.6, 1.0]);
        assert_eq!(nodes.len(), 257);
        assert_eq!(nodes[96], 0.6);
        assert_eq!(nodes[160], 1.0);
        assert!(nodes.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rectangle_odd_mode() {
        let d = segment(PI, 0.2, Dimension::Planar);
        let v = verify_bound(&d, &VerifyOptions::default()).unwrap();
        let odd = v.mu1_odd.unwrap();
        assert!((1.0..1.001).contains(&odd), "{odd}");
        assert!((v.mu1.unwrap() - odd).abs() < 1e-12);
        assert!(v.satisfied.unwrap());
        assert!((v.odd.unwrap().refined_estimate.unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cylinder_takes_axial_mode() {
        let d = segment(PI, 0.2, Dimension::Cylinder { height: 10.0 });
        let v = verify_bound(
            &d,
            &VerifyOptions {
                n_s: 64,
                n_r: 2,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(v.mu1.unwrap(), (PI / 10.0).powi(2));
    }

    #[test]
    fn cylinder_combination_order() {
        let planar = EigResult {
            values: vec![1.0, 4.0],
            residuals: vec![0.0; 2],
            backward_errors: vec![0.0; 2],
            n_s: 1,
            n_r: 1,
            iterations: 1,
            refined_estimate: None,
        };
        let c = cylinder_spectrum(&planar, PI / 1.5, 4);
        assert_eq!(c.values, vec![1.0, 2.25, 3.25, 4.0]);
    }

    #[test]
    fn nested_grids_decrease_eigenvalue() {
        let m = Builtin::Moustache.build(2048).unwrap();
        let d = TubeDomain::build(m, 0.03, Dimension::Planar).unwrap();
        let g = default_grid(&d, 64, 4, Mode::Full);
        let coarse = spectrum_on(&d, &g, Mode::Full, 0, 3, false).unwrap();
        let fine = spectrum_on(&d, &g.refined(), Mode::Full, 0, 3, false).unwrap();
        for (c, f) in coarse.values.iter().zip(&fine.values) {
            assert!(f <= &(c + 1e-12), "{f} > {c}");
        }
    }
}
