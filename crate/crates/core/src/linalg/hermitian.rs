use num_complex::Complex64;

use crate::error::Result;

use super::eigen;
use super::matrix::ComplexMatrix;

/// A complex matrix that is exactly conjugate-symmetric.
///
/// Construction averages the two triangles and zeroes the imaginary part of
/// the diagonal, so `get(i, j) == get(j, i).conj()` holds bit for bit.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Projects an arbitrary matrix onto the Hermitian matrices.
    pub fn new(m: ComplexMatrix) -> Self {
        let n = m.n();
        Self::from_fn(n, |i, j| m.get(i, j))
    }

    pub(crate) fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Complex64::new(f(i, i).re, 0.0));
            for j in (i + 1)..n {
                let upper = (f(i, j) + f(j, i).conj()) * 0.5;
                m.set(i, j, upper);
                m.set(j, i, upper.conj());
            }
        }
        HermitianMatrix(m)
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `(lambda_min, lambda_max)` from the cyclic Jacobi solver.
    pub fn eigen_extremes(&self, tol: f64) -> Result<(f64, f64)> {
        eigen::hermitian_eigen_extremes(self, tol)
    }

    /// Spectral norm `max(|lambda_min|, |lambda_max|)`.
    pub fn spectral_norm(&self) -> Result<f64> {
        let (lo, hi) = eigen::tridiagonal_extremes(self)?;
        Ok(lo.abs().max(hi.abs()))
    }
}

impl From<HermitianMatrix> for ComplexMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.0
    }
}
