//! Dense complex matrices, tolerances and value clustering.
//!
//! Everything here works in `f64`. Exact identities from the frame-theory
//! side are certified by comparing residuals against a [`Tolerance`], never
//! symbolically.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub use num_complex::Complex64 as Complex;

/// Default threshold for entrywise and residual comparisons.
pub const DEFAULT_EQ_TOL: f64 = 1e-9;
/// Default gap threshold used when clustering angle values.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

/// Comparison thresholds carried alongside every certified object.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    eq_tol: f64,
    cluster_tol: f64,
}

impl Tolerance {
    pub fn new(eq_tol: f64, cluster_tol: f64) -> Result<Self> {
        if !(eq_tol > 0.0 && eq_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "eq_tol must be positive, got {eq_tol}"
            )));
        }
        if !(cluster_tol > 0.0 && cluster_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cluster_tol must be positive, got {cluster_tol}"
            )));
        }
        if cluster_tol < eq_tol {
            return Err(Error::InvalidParameter(format!(
                "cluster_tol ({cluster_tol}) must not be smaller than eq_tol ({eq_tol})"
            )));
        }
        Ok(Self {
            eq_tol,
            cluster_tol,
        })
    }

    pub fn eq_tol(&self) -> f64 {
        self.eq_tol
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eq_tol: DEFAULT_EQ_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
        }
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            data.iter().map(|&x| Complex::new(x, 0.0)).collect(),
        )
    }

    /// Builds a matrix from a slice of equally sized real rows.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_real(rows.len(), cols, &flat)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn conj_transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(Complex, Complex) -> Complex) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, factor: Complex) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`; infinite if shapes differ.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.sub(other).map_or(f64::INFINITY, |d| d.max_abs())
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    /// True when every imaginary part is at most `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() <= tol)
    }

    /// Determinant by LU decomposition with partial pivoting.
    pub fn det(&self) -> Result<Complex> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Complex::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[x * n + col].norm().total_cmp(&a[y * n + col].norm()))
                .expect("non-empty pivot range");
            if a[pivot * n + col].norm() == 0.0 {
                return Ok(Complex::new(0.0, 0.0));
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let factor = a[r * n + col] / p;
                if factor == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= factor * v;
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| {
                    if z.im == 0.0 {
                        format!("{:.6}", z.re)
                    } else {
                        format!("{:.6}{:+.6}i", z.re, z.im)
                    }
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Standard Hermitian inner product `Σ u_i conj(v_i)`.
pub fn inner(u: &[Complex], v: &[Complex]) -> Complex {
    u.iter().zip(v).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(u: &[Complex]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of a Hermitian matrix, sorted ascending.
pub fn hermitian_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::Dimension("eigenvalues of non-square matrix".into()));
    }
    let n = m.rows();
    let dm = DMatrix::from_fn(n, n, |i, j| m.get(i, j));
    let mut values: Vec<f64> = dm.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Single-linkage clustering of scalar values.
///
/// Sorted values whose consecutive gap is at most `cluster_tol` share a
/// cluster; each cluster is reported by its mean. The output is strictly
/// increasing and independent of input order.
pub fn cluster(values: &[f64], tol: &Tolerance) -> Vec<f64> {
    cluster_with_gap(values, tol.cluster_tol())
}

pub(crate) fn cluster_with_gap(values: &[f64], gap: f64) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > gap {
            let group = &sorted[start..i];
            out.push(group.iter().sum::<f64>() / group.len() as f64);
            start = i;
        }
    }
    out
}

/// Two sorted value sets agree when they have equal length and every
/// paired value differs by at most `tol`.
pub fn sets_match(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}
