//! Weighted Sturm–Liouville problems `-(p u')' + q u = μ w u` on an interval,
//! discretized with piecewise-linear elements.

use super::band::BandMatrix;
use super::pencil::{self, Eigenpairs};
use super::{aligned_nodes, shift_for};
use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndCondition {
    Neumann,
    Dirichlet,
}

type Coefficient = Box<dyn Fn(f64) -> f64 + Send + Sync>;

pub struct SLProblem {
    pub a: f64,
    pub b: f64,
    pub p: Coefficient,
    pub q: Coefficient,
    pub w: Coefficient,
    pub left: EndCondition,
    pub right: EndCondition,
    /// Points where a coefficient has a kink or jump; mesh nodes are placed
    /// on them.
    pub breakpoints: Vec<f64>,
}

impl SLProblem {
    /// Problem with `q = 0`.
    pub fn new<P, W>(a: f64, b: f64, p: P, w: W, left: EndCondition, right: EndCondition) -> SLProblem
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        W: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        SLProblem {
            a,
            b,
            p: Box::new(p),
            q: Box::new(|_| 0.0),
            w: Box::new(w),
            left,
            right,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_potential<Q: Fn(f64) -> f64 + Send + Sync + 'static>(mut self, q: Q) -> SLProblem {
        self.q = Box::new(q);
        self
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> SLProblem {
        self.breakpoints = breakpoints;
        self
    }
}

/// Stiffness and mass matrices on a given mesh, with Dirichlet nodes removed.
/// Also reports whether `q` vanished at every quadrature point.
fn assemble(pr: &SLProblem, nodes: &[f64]) -> Result<(BandMatrix, BandMatrix, bool)> {
    let ne = nodes.len() - 1;
    let first = usize::from(pr.left == EndCondition::Dirichlet);
    let last = ne - usize::from(pr.right == EndCondition::Dirichlet);
    let dof = |i: usize| (i >= first && i <= last).then(|| i - first);
    let size = last + 1 - first;
    let mut k = BandMatrix::zeros(size, 1);
    let mut m = BandMatrix::zeros(size, 1);
    let gl = GaussLegendre::new(3);
    let mut q_zero = true;
    for e in 0..ne {
        let (x0, x1) = (nodes[e], nodes[e + 1]);
        let h = x1 - x0;
        let (mut ke, mut me) = ([[0.0; 2]; 2], [[0.0; 2]; 2]);
        for (x, wt) in gl.mapped(x0, x1) {
            let (p, q, w) = ((pr.p)(x), (pr.q)(x), (pr.w)(x));
            if !(p > 0.0) {
                return Err(Error::NonPositiveCoefficient { name: "p", x, value: p });
            }
            if !(w > 0.0) {
                return Err(Error::NonPositiveCoefficient { name: "w", x, value: w });
            }
            if !(q >= 0.0) {
                return Err(Error::NonPositiveCoefficient { name: "q", x, value: q });
            }
            q_zero &= q == 0.0;
            let phi = [(x1 - x) / h, (x - x0) / h];
            let dphi = [-1.0 / h, 1.0 / h];
            for a in 0..2 {
                for b in 0..2 {
                    ke[a][b] += wt * (p * dphi[a] * dphi[b] + q * phi[a] * phi[b]);
                    me[a][b] += wt * w * phi[a] * phi[b];
                }
            }
        }
        for a in 0..2 {
            for b in 0..=a {
                if let (Some(i), Some(j)) = (dof(e + a), dof(e + b)) {
                    k.add(i, j, ke[a][b]);
                    m.add(i, j, me[a][b]);
                }
            }
        }
    }
    Ok((k, m, q_zero))
}

/// Mesh of about `n` elements on `[a, b]` with nodes on the breakpoints.
pub fn sl_mesh(pr: &SLProblem, n: usize) -> Vec<f64> {
    aligned_nodes(pr.a, pr.b, n, &pr.breakpoints)
}

/// The `count` smallest eigenpairs on the given mesh. For Neumann ends with
/// `q = 0` the constant mode is excluded, so the first value is the first
/// nontrivial one.
pub fn solve_sl_on(pr: &SLProblem, nodes: &[f64], count: usize) -> Result<Eigenpairs> {
    if !(pr.b > pr.a) || nodes.len() < 3 {
        return Err(Error::InvalidParameter(
            "Sturm-Liouville interval needs a < b and at least 2 elements".into(),
        ));
    }
    let (k, m, q_zero) = assemble(pr, nodes)?;
    let pure_neumann = q_zero && pr.left == EndCondition::Neumann && pr.right == EndCondition::Neumann;
    let ones = vec![1.0; k.size()];
    let shift = shift_for(pr.b - pr.a);
    pencil::smallest_eigenpairs(&k, &m, count, pure_neumann.then_some(ones.as_slice()), shift)
}

/// The `count` smallest eigenvalues with about `n` elements.
pub fn solve_sl(pr: &SLProblem, n: usize, count: usize) -> Result<Eigenpairs> {
    solve_sl_on(pr, &sl_mesh(pr, n), count)
}
