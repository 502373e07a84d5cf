//! Symmetric banded storage and Cholesky factorization.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Pivots below this fraction of the original diagonal count as zero modes.
const ZERO_PIVOT: f64 = 1e-12;

/// Symmetric matrix storing the lower band `j in [i - bw, i]` row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBand {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl SymBand {
    pub fn zeros(n: usize, bw: usize) -> Self {
        let bw = bw.min(n.saturating_sub(1));
        Self {
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

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        (i - j <= self.bw).then(|| i * (self.bw + 1) + (i - j))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.data[s])
    }

    /// Adds `v` to entry `(i, j)` (and its mirror).
    ///
    /// # Panics
    /// If `(i, j)` lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self
            .slot(i, j)
            .unwrap_or_else(|| panic!("entry ({i}, {j}) outside bandwidth {}", self.bw));
        self.data[s] += v;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let row = &self.data[i * (self.bw + 1)..(i + 1) * (self.bw + 1)];
            y[i] += row[0] * x[i];
            for j in lo..i {
                let v = row[i - j];
                y[i] += v * x[j];
                y[j] += v * x[i];
            }
        }
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Drops rows/columns not listed in `keep` (ascending indices).
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let bw = keep
            .iter()
            .enumerate()
            .map(|(ri, &i)| {
                let lo = i.saturating_sub(self.bw);
                let first = keep[..ri].partition_point(|&j| j < lo);
                ri - first
            })
            .max()
            .unwrap_or(0);
        let mut out = Self::zeros(keep.len(), bw);
        for (ri, &i) in keep.iter().enumerate() {
            for rj in ri.saturating_sub(out.bw)..=ri {
                let v = self.get(i, keep[rj]);
                if v != 0.0 {
                    out.add(ri, rj, v);
                }
            }
        }
        out
    }

    /// Cholesky factor `L` with `A = L L^T`, sharing the band layout.
    pub fn cholesky(&self) -> Result<BandCholesky> {
        let (n, bw) = (self.n, self.bw);
        let w = bw + 1;
        let mut l = self.data.clone();
        let mut zero_modes = 0usize;
        let mut dead = vec![false; n];
        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..=i {
                let mut sum = l[i * w + (i - j)];
                let kl = lo.max(j.saturating_sub(bw));
                for k in kl..j {
                    sum -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                if j < i {
                    l[i * w + (i - j)] = if dead[j] { 0.0 } else { sum / l[j * w] };
                } else {
                    let diag = self.data[i * w];
                    let tol = ZERO_PIVOT * diag.abs().max(f64::MIN_POSITIVE);
                    if sum < -tol {
                        return Err(Error::Indefinite { row: i, pivot: sum });
                    }
                    if sum <= tol {
                        zero_modes += 1;
                        dead[i] = true;
                        l[i * w] = 1.0;
                    } else {
                        l[i * w] = sum.sqrt();
                    }
                }
            }
        }
        if zero_modes > 0 {
            return Err(Error::Singular { zero_modes });
        }
        Ok(BandCholesky { n, bw, l })
    }
}

#[derive(Debug, Clone)]
pub struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.len(),
            });
        }
        let w = self.bw + 1;
        let mut y = b.to_vec();
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let mut s = y[i];
            for k in lo..i {
                s -= self.l[i * w + (i - k)] * y[k];
            }
            y[i] = s / self.l[i * w];
        }
        for i in (0..self.n).rev() {
            let hi = (i + self.bw).min(self.n - 1);
            let mut s = y[i];
            for k in i + 1..=hi {
                s -= self.l[k * w + (k - i)] * y[k];
            }
            y[i] = s / self.l[i * w];
        }
        Ok(y)
    }
}
