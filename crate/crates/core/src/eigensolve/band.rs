//! Symmetric banded matrices in lower-band storage.

use crate::error::{Error, Result};

/// Symmetric `n × n` matrix with half-bandwidth `bw`: entry `(i, j)` is
/// zero whenever `|i - j| > bw`. Only the lower band is stored, column by
/// column.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> BandMatrix {
        BandMatrix {
            n,
            bw,
            data: vec![0.0; n * (bw + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        (i - j <= self.bw && i < self.n).then(|| j * (self.bw + 1) + (i - j))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.index(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `v` to entries `(i, j)` and `(j, i)`.
    ///
    /// # Panics
    /// If `(i, j)` lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self
            .index(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside band {}", self.bw));
        self.data[k] += v;
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        let w = self.bw + 1;
        for j in 0..self.n {
            let col = &self.data[j * w..(j + 1) * w];
            y[j] += col[0] * x[j];
            for (off, &a) in col.iter().enumerate().skip(1) {
                let i = j + off;
                if i >= self.n {
                    break;
                }
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    /// Infinity norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0; self.n];
        let w = self.bw + 1;
        for j in 0..self.n {
            for off in 0..w {
                let i = j + off;
                if i >= self.n {
                    break;
                }
                let a = self.data[j * w + off].abs();
                rows[i] += a;
                if off > 0 {
                    rows[j] += a;
                }
            }
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// `self + alpha * other`; both must have the same size and bandwidth.
    pub fn add_scaled(&self, alpha: f64, other: &BandMatrix) -> BandMatrix {
        assert_eq!((self.n, self.bw), (other.n, other.bw));
        BandMatrix {
            n: self.n,
            bw: self.bw,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + alpha * b).collect(),
        }
    }

    /// Cholesky factorization `A = L Lᵀ`; fails on a nonpositive pivot.
    pub fn cholesky(&self) -> Result<BandCholesky> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = self.data.clone();
        for j in 0..n {
            let k0 = j.saturating_sub(bw);
            let mut d = l[j * w];
            for k in k0..j {
                let v = l[k * w + (j - k)];
                d -= v * v;
            }
            if !(d > 0.0) {
                return Err(Error::Factorization(j));
            }
            let d = d.sqrt();
            l[j * w] = d;
            for i in j + 1..(j + w).min(n) {
                let mut v = l[j * w + (i - j)];
                for k in i.saturating_sub(bw)..j {
                    v -= l[k * w + (i - k)] * l[k * w + (j - k)];
                }
                l[j * w + (i - j)] = v / d;
            }
        }
        Ok(BandCholesky { n, bw, l })
    }
}

/// Lower-triangular banded Cholesky factor.
#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    /// Overwrites `b` with `A⁻¹ b`.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let w = self.bw + 1;
        for j in 0..self.n {
            b[j] /= self.l[j * w];
            let bj = b[j];
            for off in 1..w {
                let i = j + off;
                if i >= self.n {
                    break;
                }
                b[i] -= self.l[j * w + off] * bj;
            }
        }
        for j in (0..self.n).rev() {
            let mut v = b[j];
            for off in 1..w {
                let i = j + off;
                if i >= self.n {
                    break;
                }
                v -= self.l[j * w + off] * b[i];
            }
            b[j] = v / self.l[j * w];
        }
    }
}
