use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Asymmetry tolerated on construction, relative to the largest entry.
const HERMITIAN_TOL: f64 = 1e-9;

/// Dense complex Hermitian matrix, exactly symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    /// Validates and symmetrizes `m`. Fails on non-square input or on an
    /// asymmetry above `1e-9` relative to the largest entry.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let n = m.nrows();
        let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
        let mut asym = 0.0f64;
        for i in 0..n {
            for j in i..n {
                asym = asym.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if !asym.is_finite() || !scale.is_finite() || asym > HERMITIAN_TOL * scale {
            return Err(Error::NonHermitian(asym));
        }
        Ok(Self::symmetrized(m))
    }

    fn symmetrized(mut m: CMatrix) -> Self {
        let n = m.nrows();
        for i in 0..n {
            m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
            for j in i + 1..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Self(m)
    }

    /// `v v^H`.
    pub fn from_outer(v: &[Complex64]) -> Self {
        let n = v.len();
        Self(CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    /// Builds from real diagonal values.
    pub fn from_diagonal(d: &[f64]) -> Self {
        let n = d.len();
        Self(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(d[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0[(i, j)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.order()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.diagonal().iter().sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &HermitianMatrix, b: f64) -> Result<Self> {
        if self.order() != other.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: other.order(),
            });
        }
        Ok(Self(self.0.map(|z| z * a) + other.0.map(|z| z * b)))
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self(self.0.map(|z| z * a))
    }

    /// `tr(self · other)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    /// `v^H self v`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> f64 {
        let n = self.order();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, vi) in v.iter().enumerate().take(n) {
            let row: Complex64 = v
                .iter()
                .enumerate()
                .map(|(j, vj)| self.0[(i, j)] * vj)
                .sum();
            acc += vi.conj() * row;
        }
        acc.re
    }

    /// Eigenvalues in ascending order with matching eigenvector columns.
    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        let eig = SymmetricEigen::new(self.0.clone());
        let n = self.order();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .0
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Fails with [`Error::NotPsd`] when the smallest eigenvalue is below
    /// `-rel_tol·‖self‖_F`.
    pub fn check_psd(&self, rel_tol: f64) -> Result<()> {
        if self.order() == 0 {
            return Ok(());
        }
        let min = self.min_eigenvalue();
        if min < -rel_tol * self.frobenius_norm() {
            return Err(Error::NotPsd(min));
        }
        Ok(())
    }
}

impl TryFrom<CMatrix> for HermitianMatrix {
    type Error = Error;

    fn try_from(m: CMatrix) -> Result<Self> {
        Self::new(m)
    }
}
