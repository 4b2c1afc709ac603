//! Bilinear finite elements on the Fermi rectangle `[s₀, s₁] × [0, δ]`.

use super::aligned_nodes;
use super::band::BandMatrix;
use crate::error::{Error, Result};
use crate::fermi::{Dimension, TubeDomain};
use crate::quad::GaussLegendre;

/// Symmetry class of the planar problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// All Neumann modes on `[0, L] × [0, δ]`.
    Full,
    /// Modes odd about `s = L/2`: `[0, L/2] × [0, δ]` with Dirichlet data on
    /// `s = L/2`.
    Odd,
}

/// Tensor grid in Fermi coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct FermiGrid {
    pub s: Vec<f64>,
    pub r: Vec<f64>,
}

impl FermiGrid {
    /// About `n_s` intervals on `[s0, s1]` with nodes on the breakpoints and
    /// `n_r` equal intervals on `[0, delta]`.
    pub fn uniform(s0: f64, s1: f64, n_s: usize, delta: f64, n_r: usize, breakpoints: &[f64]) -> FermiGrid {
        let r = (0..=n_r).map(|j| delta * j as f64 / n_r as f64).collect();
        FermiGrid {
            s: aligned_nodes(s0, s1, n_s, breakpoints),
            r,
        }
    }

    /// Nested grid with every interval bisected.
    pub fn refined(&self) -> FermiGrid {
        let bisect = |v: &[f64]| {
            let mut out = Vec::with_capacity(2 * v.len() - 1);
            for w in v.windows(2) {
                out.push(w[0]);
                out.push(0.5 * (w[0] + w[1]));
            }
            out.push(v[v.len() - 1]);
            out
        };
        FermiGrid {
            s: bisect(&self.s),
            r: bisect(&self.r),
        }
    }

    pub fn n_s(&self) -> usize {
        self.s.len() - 1
    }

    pub fn n_r(&self) -> usize {
        self.r.len() - 1
    }
}

/// Stiffness and mass matrices of one discretized problem.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    pub stiffness: BandMatrix,
    pub mass: BandMatrix,
    pub grid: FermiGrid,
    /// `(s index, r index)` of each unknown; unknowns are numbered with `r`
    /// varying fastest.
    pub dofs: Vec<(usize, usize)>,
    /// Constant vector when the problem is pure Neumann without potential.
    pub null_vector: Option<Vec<f64>>,
}

/// Where the generating curve meets the rotation axis with a horizontal
/// tangent, so that the whole `r`-edge collapses onto the axis.
fn on_axis(d: &TubeDomain, s: f64) -> Result<bool> {
    let f = d.curve().frame_at(s)?;
    let tol = 1e-9 * d.curve().diameter().max(1.0);
    Ok(f.point[0].abs() <= tol && f.tangent[1].abs() <= 1e-9)
}

/// Assembles the problem on the grid. Planar and cylinder domains use the
/// cross-section operator in the given `mode`; revolution domains use the
/// meridian operator of Fourier mode `fourier_m` on `[0, L/2]` with the
/// Dirichlet condition on axis edges for `fourier_m ≥ 1`.
pub fn assemble_on(d: &TubeDomain, grid: &FermiGrid, mode: Mode, fourier_m: u32) -> Result<OperatorPair> {
    let revolution = d.dimension() == Dimension::Revolution;
    let (ns, nr) = (grid.n_s(), grid.n_r());
    let (s0, s1) = (grid.s[0], grid.s[ns]);
    let mut dirichlet = [false, false];
    if revolution {
        if fourier_m >= 1 {
            dirichlet = [on_axis(d, s0)?, on_axis(d, s1)?];
        }
    } else if mode == Mode::Odd {
        dirichlet[1] = true;
    }
    let col0 = usize::from(dirichlet[0]);
    let col1 = ns - usize::from(dirichlet[1]);
    let stride = nr + 1;
    let dof = |i: usize, j: usize| (i >= col0 && i <= col1).then(|| (i - col0) * stride + j);
    let size = (col1 + 1 - col0) * stride;
    let dofs = (col0..=col1).flat_map(|i| (0..=nr).map(move |j| (i, j))).collect();
    let mut k = BandMatrix::zeros(size, stride + 1);
    let mut m = BandMatrix::zeros(size, stride + 1);

    let gl = GaussLegendre::new(3);
    let m2 = f64::from(fourier_m).powi(2);
    let curve = d.curve();
    for i in 0..ns {
        let (sa, sb) = (grid.s[i], grid.s[i + 1]);
        let hs = sb - sa;
        // Curve data at the s-quadrature points of this column.
        let mut col = Vec::with_capacity(3);
        for (s, ws) in gl.mapped(sa, sb) {
            let kap = curve.curvature(s)?;
            let (x, zp) = if revolution {
                let f = curve.frame_at(s)?;
                (f.point[0], f.tangent[1])
            } else {
                (1.0, 0.0)
            };
            col.push((s, ws, kap, x, zp));
        }
        for j in 0..nr {
            let (ra, rb) = (grid.r[j], grid.r[j + 1]);
            let hr = rb - ra;
            let mut ke = [[0.0; 4]; 4];
            let mut me = [[0.0; 4]; 4];
            for &(s, ws, kap, x, zp) in &col {
                let xi = (s - sa) / hs;
                for (r, wr) in gl.mapped(ra, rb) {
                    let jac = 1.0 + r * kap;
                    if !(jac > 0.0) {
                        return Err(Error::JacobianNonPositive { s, min: jac });
                    }
                    let (a_s, a_r, c, w) = if revolution {
                        let rho = x + r * zp;
                        if !(rho > 0.0) {
                            return Err(Error::JacobianNonPositive { s, min: rho * jac });
                        }
                        (rho / jac, jac * rho, m2 * jac / rho, jac * rho)
                    } else {
                        (1.0 / jac, jac, 0.0, jac)
                    };
                    let eta = (r - ra) / hr;
                    // Local nodes: (i, j), (i, j+1), (i+1, j), (i+1, j+1).
                    let phi = [(1.0 - xi) * (1.0 - eta), (1.0 - xi) * eta, xi * (1.0 - eta), xi * eta];
                    let ds = [-(1.0 - eta) / hs, -eta / hs, (1.0 - eta) / hs, eta / hs];
                    let dr = [-(1.0 - xi) / hr, (1.0 - xi) / hr, -xi / hr, xi / hr];
                    let wt = ws * wr;
                    for a in 0..4 {
                        for b in 0..=a {
                            ke[a][b] += wt * (a_s * ds[a] * ds[b] + a_r * dr[a] * dr[b] + c * phi[a] * phi[b]);
                            me[a][b] += wt * w * phi[a] * phi[b];
                        }
                    }
                }
            }
            let nodes = [(i, j), (i, j + 1), (i + 1, j), (i + 1, j + 1)];
            for a in 0..4 {
                for b in 0..=a {
                    if let (Some(p), Some(q)) = (dof(nodes[a].0, nodes[a].1), dof(nodes[b].0, nodes[b].1)) {
                        k.add(p, q, ke[a][b]);
                        m.add(p, q, me[a][b]);
                    }
                }
            }
        }
    }
    let pure_neumann = !dirichlet[0] && !dirichlet[1] && fourier_m == 0;
    Ok(OperatorPair {
        stiffness: k,
        mass: m,
        grid: grid.clone(),
        dofs,
        null_vector: pure_neumann.then(|| vec![1.0; size]),
    })
}

/// Default grid for `mode`: `n_s` intervals over the full profile length,
/// so half-length problems use about `n_s / 2`.
pub fn default_grid(d: &TubeDomain, n_s: usize, n_r: usize, mode: Mode) -> FermiGrid {
    let len = d.length();
    let half = mode == Mode::Odd || d.dimension() == Dimension::Revolution;
    let (s1, cols) = if half {
        (0.5 * len, (n_s / 2).max(1))
    } else {
        (len, n_s)
    };
    FermiGrid::uniform(0.0, s1, cols, d.delta(), n_r, &d.curve().breakpoints())
}

/// Assembles on the default grid.
pub fn assemble_2d(d: &TubeDomain, n_s: usize, n_r: usize, mode: Mode, fourier_m: u32) -> Result<OperatorPair> {
    assemble_on(d, &default_grid(d, n_s, n_r, mode), mode, fourier_m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Builtin;

    fn segment(len: f64, delta: f64) -> TubeDomain {
        TubeDomain::build(
            Builtin::Segment { length: len }.build(256).unwrap(),
            delta,
            Dimension::Planar,
        )
        .unwrap()
    }

    #[test]
    fn area_from_mass_matrix() {
        let arc = Builtin::CircularArc {
            radius: 1.0,
            half_angle: 0.5,
        }
        .build(256)
        .unwrap();
        let d = TubeDomain::build(arc, 0.2, Dimension::Planar).unwrap();
        let op = assemble_2d(&d, 64, 4, Mode::Full, 0).unwrap();
        let ones = vec![1.0; op.mass.size()];
        let area: f64 = op.mass.mul(&ones).iter().sum();
        let exact = 1.0 * (1.2f64.powi(2) - 1.0) / 2.0 * 1.0;
        assert!((area - exact).abs() < 1e-12, "{area} vs {exact}");
        let k1 = op.stiffness.mul(&ones);
        assert!(k1.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn odd_grid_has_dirichlet_column() {
        let d = segment(2.0, 0.1);
        let op = assemble_2d(&d, 32, 4, Mode::Odd, 0).unwrap();
        assert_eq!(op.grid.n_s(), 16);
        assert_eq!(op.mass.size(), 16 * 5);
        assert!(op.null_vector.is_none());
        assert_eq!(op.stiffness.bandwidth(), 6);
    }

    #[test]
    fn refined_grid_is_nested() {
        let g = FermiGrid::uniform(0.0, 1.0, 10, 0.1, 3, &[0.37]);
        let f = g.refined();
        assert!(g.s.iter().all(|x| f.s.contains(x)));
        assert!(g.r.iter().all(|x| f.r.contains(x)));
        assert_eq!(f.n_r(), 6);
    }

    #[test]
    fn shell_axis_edges_detected() {
        let shell = Builtin::CircularArc {
            radius: 1.0,
            half_angle: std::f64::consts::PI,
        }
        .build(512)
        .unwrap();
        let d = TubeDomain::build(shell, 0.1, Dimension::Revolution).unwrap();
        let g = default_grid(&d, 64, 4, Mode::Full);
        assert!(on_axis(&d, g.s[0]).unwrap() && on_axis(&d, g.s[g.n_s()]).unwrap());
        let op0 = assemble_on(&d, &g, Mode::Full, 0).unwrap();
        let op1 = assemble_on(&d, &g, Mode::Full, 1).unwrap();
        assert!(op0.null_vector.is_some());
        assert_eq!(op1.mass.size(), op0.mass.size() - 2 * 5);
    }
}
