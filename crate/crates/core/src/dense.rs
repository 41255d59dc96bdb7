//! Small dense row-major matrix helpers.

use crate::error::{Error, Result};

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, 1.0)
    }

    pub fn scaled_identity(dim: usize, value: f64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = value;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = v;
        }
        m
    }

    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| dot(self.row(i), x)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * d..(i + 1) * d];
                for j in 0..d {
                    dst[j] += a * orow[j];
                }
            }
        }
        out
    }

    /// `xᵀ M x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        (0..self.dim).map(|i| x[i] * dot(self.row(i), x)).sum()
    }

    /// `self += c · x xᵀ`.
    pub fn add_outer(&mut self, x: &[f64], c: f64) {
        let d = self.dim;
        for i in 0..d {
            let xi = c * x[i];
            if xi == 0.0 {
                continue;
            }
            let row = &mut self.data[i * d..(i + 1) * d];
            for j in 0..d {
                row[j] += xi * x[j];
            }
        }
    }

    pub fn symmetrize(&mut self) {
        let d = self.dim;
        for i in 0..d {
            for j in (i + 1)..d {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, v);
                self.set(j, i, v);
            }
        }
    }

    /// `max_ij |self_ij - other_ij|`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Lower-triangular Cholesky factor `L` with `L Lᵀ = A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    lower: Matrix,
}

impl Cholesky {
    /// Factor the symmetric matrix `a`, reading only its lower triangle.
    pub fn new(a: &Matrix) -> Result<Self> {
        let d = a.dim();
        let mut l = Matrix::zeros(d);
        for j in 0..d {
            let mut diag = a.get(j, j);
            for k in 0..j {
                diag -= l.get(j, k) * l.get(j, k);
            }
            if !(diag > 0.0) || !diag.is_finite() {
                return Err(Error::NotPositiveDefinite { pivot: j, value: diag });
            }
            let ljj = diag.sqrt();
            l.set(j, j, ljj);
            for i in (j + 1)..d {
                let mut s = a.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / ljj);
            }
        }
        Ok(Self { lower: l })
    }

    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    /// `L z`.
    pub fn mul_lower(&self, z: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d).map(|i| dot(&self.lower.row(i)[..=i], &z[..=i])).collect()
    }

    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.dim()).map(|i| self.lower.get(i, i).ln()).sum::<f64>()
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let d = self.dim();
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..d {
            let mut s = y[i];
            for k in 0..i {
                s -= l.get(i, k) * y[k];
            }
            y[i] = s / l.get(i, i);
        }
        for i in (0..d).rev() {
            let mut s = y[i];
            for k in (i + 1)..d {
                s -= l.get(k, i) * y[k];
            }
            y[i] = s / l.get(i, i);
        }
        y
    }

    /// `A⁻¹`, symmetric by construction.
    pub fn inverse(&self) -> Matrix {
        let d = self.dim();
        let l = &self.lower;
        // Invert L in place (lower triangular), then A⁻¹ = L⁻ᵀ L⁻¹.
        let mut linv = Matrix::zeros(d);
        for j in 0..d {
            linv.set(j, j, 1.0 / l.get(j, j));
            for i in (j + 1)..d {
                let mut s = 0.0;
                for k in j..i {
                    s -= l.get(i, k) * linv.get(k, j);
                }
                linv.set(i, j, s / l.get(i, i));
            }
        }
        let mut inv = Matrix::zeros(d);
        for i in 0..d {
            for j in 0..=i {
                let mut s = 0.0;
                for k in i..d {
                    s += linv.get(k, i) * linv.get(k, j);
                }
                inv.set(i, j, s);
                inv.set(j, i, s);
            }
        }
        inv
    }
}
