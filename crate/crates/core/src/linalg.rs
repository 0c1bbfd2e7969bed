//! Direct solvers for the tridiagonal (1-D) and banded (2-D) Newton systems.
//!
//! Both Jacobians are negative-definite M-matrix-like (conduction stencil plus
//! a non-positive radiation diagonal), so elimination runs without pivoting.

use crate::error::{Error, Result};

/// Tridiagonal matrix; `lower[i]` couples row i to i-1 (`lower[0]` unused),
/// `upper[i]` couples row i to i+1 (`upper[n-1]` unused).
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![0.0; n],
            diag: vec![0.0; n],
            upper: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if row == col {
            self.diag[row]
        } else if col + 1 == row {
            self.lower[row]
        } else if row + 1 == col {
            self.upper[row]
        } else {
            0.0
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.upper[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// Thomas algorithm.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.len();
        assert_eq!(rhs.len(), n);
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::Singular { row: 0 });
        }
        c[0] = self.upper[0] / pivot;
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.lower[i] * c[i - 1];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::Singular { row: i });
            }
            c[i] = if i + 1 < n {
                self.upper[i] / pivot
            } else {
                0.0
            };
            d[i] = (rhs[i] - self.lower[i] * d[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }
}

/// Square band matrix with `bw` sub- and super-diagonals, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            data: vec![0.0; n * (2 * bw + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(
            col + self.bw >= row && col <= row + self.bw,
            "({row},{col}) outside band"
        );
        row * (2 * self.bw + 1) + (col + self.bw - row)
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        if col + self.bw < row || col > row + self.bw {
            0.0
        } else {
            self.data[self.index(row, col)]
        }
    }

    pub fn add(&mut self, row: usize, col: usize, v: f64) {
        let i = self.index(row, col);
        self.data[i] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.bw);
                let hi = (i + self.bw).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Gaussian elimination without pivoting, in place; consumes the matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn solve(mut self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.n;
        let bw = self.bw;
        assert_eq!(rhs.len(), n);
        let mut b = rhs.to_vec();
        for k in 0..n {
            let pivot = self.data[self.index(k, k)];
            if pivot == 0.0 || !pivot.is_finite() {
                return Err(Error::Singular { row: k });
            }
            let last = (k + bw).min(n - 1);
            for i in k + 1..=last {
                let ik = self.index(i, k);
                let factor = self.data[ik] / pivot;
                if factor == 0.0 {
                    continue;
                }
                self.data[ik] = 0.0;
                for j in k + 1..=last {
                    let kj = self.data[self.index(k, j)];
                    let ij = self.index(i, j);
                    self.data[ij] -= factor * kj;
                }
                b[i] -= factor * b[k];
            }
        }
        for k in (0..n).rev() {
            let last = (k + bw).min(n - 1);
            let mut s = b[k];
            for j in k + 1..=last {
                s -= self.data[self.index(k, j)] * b[j];
            }
            b[k] = s / self.data[self.index(k, k)];
        }
        Ok(b)
    }
}
