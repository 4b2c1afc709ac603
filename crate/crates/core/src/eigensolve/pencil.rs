//! Smallest eigenpairs of a symmetric pencil `K x = μ M x` by shift-invert
//! subspace iteration with Rayleigh–Ritz projection.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::band::BandMatrix;
use crate::error::{Error, Result};

/// Relative residual accepted as converged.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Normwise backward error accepted once the residual has stopped
/// decreasing, i.e. sits at its roundoff floor.
pub const BACKWARD_TOL: f64 = 1e-12;
/// Iterations without the residual halving that count as stagnation.
const STAGNATION_STEPS: usize = 3;
pub const MAX_ITERATIONS: usize = 500;
const SEED: u64 = 0x7ab1e;

/// Converged eigenpairs, ascending.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    /// `‖Kx − μMx‖₂ / (|μ| ‖Mx‖₂)` per pair.
    pub residuals: Vec<f64>,
    /// `‖Kx − μMx‖₂ / ((‖K‖ + |μ|‖M‖) ‖x‖₂)` per pair.
    pub backward_errors: Vec<f64>,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Removes the `M`-component along `c` from `x`; `mc = M c`, `cmc = cᵀMc`.
fn deflate(x: &mut [f64], c: &[f64], mc: &[f64], cmc: f64) {
    let a = dot(mc, x) / cmc;
    x.iter_mut().zip(c).for_each(|(v, ci)| *v -= a * ci);
}

/// The `count` smallest eigenpairs of `K x = μ M x` with `K` positive
/// semidefinite and `M` positive definite. `null` is an optional exact null
/// vector of `K` that is projected out `M`-orthogonally. `shift` must lie
/// below the spectrum so that `K − shift·M` is positive definite.
pub fn smallest_eigenpairs(
    k: &BandMatrix,
    m: &BandMatrix,
    count: usize,
    null: Option<&[f64]>,
    shift: f64,
) -> Result<Eigenpairs> {
    let n = k.size();
    let avail = n - usize::from(null.is_some());
    assert!(count >= 1 && count <= avail, "requested {count} eigenpairs of {avail}");
    let p = (2 * count).max(count + 8).min(avail);

    let factor = k.add_scaled(-shift, m).cholesky()?;
    let (k_norm, m_norm) = (k.norm_inf(), m.norm_inf());
    let defl = null.map(|c| {
        let mc = m.mul(c);
        let cmc = dot(c, &mc);
        (c.to_vec(), mc, cmc)
    });
    let project = |x: &mut Vec<f64>| {
        if let Some((c, mc, cmc)) = &defl {
            deflate(x, c, mc, *cmc);
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let random_vector = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| rng.random_range(-1.0..1.0)).collect() };
    let mut x: Vec<Vec<f64>> = (0..p).map(|_| random_vector(&mut rng)).collect();
    x.iter_mut().for_each(&project);

    let mut best = f64::INFINITY;
    let mut still = 0;
    for iter in 1..=MAX_ITERATIONS {
        // Y = (K − σM)⁻¹ M X
        let mut y: Vec<Vec<f64>> = x
            .iter()
            .map(|xi| {
                let mut v = m.mul(xi);
                factor.solve_in_place(&mut v);
                project(&mut v);
                v
            })
            .collect();
        let scale: Vec<f64> = y.iter().map(|v| norm(v).max(f64::MIN_POSITIVE)).collect();
        y.iter_mut()
            .zip(&scale)
            .for_each(|(v, s)| v.iter_mut().for_each(|a| *a /= s));

        let ky: Vec<Vec<f64>> = y.iter().map(|v| k.mul(v)).collect();
        let my: Vec<Vec<f64>> = y.iter().map(|v| m.mul(v)).collect();
        let kr = DMatrix::from_fn(p, p, |i, j| 0.5 * (dot(&y[i], &ky[j]) + dot(&y[j], &ky[i])));
        let mr = DMatrix::from_fn(p, p, |i, j| 0.5 * (dot(&y[i], &my[j]) + dot(&y[j], &my[i])));

        // Whiten the reduced mass matrix, dropping directions lost to rank
        // deficiency, then solve the reduced standard problem.
        let me = SymmetricEigen::new(mr);
        let top = me.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..p).filter(|&i| me.eigenvalues[i] > 1e-13 * top).collect();
        let w = DMatrix::from_fn(p, keep.len(), |i, j| {
            me.eigenvectors[(i, keep[j])] / me.eigenvalues[keep[j]].sqrt()
        });
        let c = w.transpose() * &kr * &w;
        let c = 0.5 * (&c + c.transpose());
        let ce = SymmetricEigen::new(c);
        let mut order: Vec<usize> = (0..keep.len()).collect();
        order.sort_by(|&a, &b| ce.eigenvalues[a].total_cmp(&ce.eigenvalues[b]));
        let z = &w * ce.eigenvectors.select_columns(&order);
        let theta: Vec<f64> = order.iter().map(|&i| ce.eigenvalues[i]).collect();

        let combine = |basis: &[Vec<f64>], col: usize| -> Vec<f64> {
            let mut v = vec![0.0; n];
            for (j, b) in basis.iter().enumerate() {
                let a = z[(j, col)];
                v.iter_mut().zip(b).for_each(|(vi, bi)| *vi += a * bi);
            }
            v
        };
        let mut new_x: Vec<Vec<f64>> = (0..theta.len()).map(|c| combine(&y, c)).collect();

        let mut residuals = Vec::with_capacity(count);
        let mut backward = Vec::with_capacity(count);
        let mut done = theta.len() >= count;
        for (c, &mu) in theta.iter().enumerate().take(count) {
            let kx = combine(&ky, c);
            let mx = combine(&my, c);
            let r: Vec<f64> = kx.iter().zip(&mx).map(|(a, b)| a - mu * b).collect();
            let rn = norm(&r);
            let rel = rn / (mu.abs().max(f64::MIN_POSITIVE) * norm(&mx));
            let eta = rn / ((k_norm + mu.abs() * m_norm) * norm(&new_x[c]));
            done &= rel <= RESIDUAL_TOL || (still >= STAGNATION_STEPS && eta <= BACKWARD_TOL);
            residuals.push(rel);
            backward.push(eta);
        }
        let worst = residuals.iter().cloned().fold(0.0, f64::max);
        still = if worst > 0.5 * best { still + 1 } else { 0 };
        best = best.min(worst);
        if done {
            new_x.truncate(count);
            return Ok(Eigenpairs {
                values: theta[..count].to_vec(),
                vectors: new_x,
                residuals,
                backward_errors: backward,
                iterations: iter,
            });
        }
        while new_x.len() < p {
            let mut v = random_vector(&mut rng);
            project(&mut v);
            new_x.push(v);
        }
        x = new_x;
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: best,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Linear elements for `-u'' = μ u` on `[0, π]` with Neumann ends.
    fn neumann_1d(n: usize) -> (BandMatrix, BandMatrix) {
        let h = PI / n as f64;
        let mut k = BandMatrix::zeros(n + 1, 1);
        let mut m = BandMatrix::zeros(n + 1, 1);
        for e in 0..n {
            for (a, b, kv, mv) in [(e, e, 1.0, 2.0), (e + 1, e + 1, 1.0, 2.0), (e + 1, e, -1.0, 1.0)] {
                k.add(a, b, kv / h);
                m.add(a, b, mv * h / 6.0);
            }
        }
        (k, m)
    }

    #[test]
    fn discrete_neumann_spectrum() {
        let n = 64;
        let (k, m) = neumann_1d(n);
        let ones = vec![1.0; n + 1];
        let res = smallest_eigenpairs(&k, &m, 4, Some(&ones), -0.1).unwrap();
        let h = PI / n as f64;
        for (j, mu) in res.values.iter().enumerate() {
            let t = (j + 1) as f64 * h;
            let exact = 6.0 / (h * h) * (1.0 - t.cos()) / (2.0 + t.cos());
            assert!((mu - exact).abs() < 1e-10 * exact, "{j}: {mu} vs {exact}");
        }
        assert!(res.residuals.iter().all(|&r| r <= RESIDUAL_TOL));
    }

    #[test]
    fn zero_mode_without_deflation() {
        let (k, m) = neumann_1d(32);
        let res = smallest_eigenpairs(&k, &m, 2, None, -0.1).unwrap();
        assert!(res.values[0].abs() < 1e-12);
        assert!((res.values[1] - 1.0).abs() < 1e-3);
    }
}
