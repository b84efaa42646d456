//! Dense complex matrices, Hermitian parts, eigenvalue extremes and the
//! operator norm.

pub mod eigen;
mod hermitian;
mod matrix;

pub use eigen::{hermitian_eigen_extremes, hermitian_eigenvalues, tridiagonal_extremes};
pub use hermitian::HermitianMatrix;
pub use matrix::ComplexMatrix;

pub(crate) use matrix::check_tol;

use crate::error::Result;

pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    a.adjoint()
}

pub fn real_part(a: &ComplexMatrix) -> HermitianMatrix {
    a.real_part()
}

pub fn imag_part(a: &ComplexMatrix) -> HermitianMatrix {
    a.imag_part()
}

pub fn operator_norm(a: &ComplexMatrix, tol: f64) -> Result<f64> {
    a.operator_norm(tol)
}

pub fn block_off_diagonal(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    ComplexMatrix::block_off_diagonal(x, y)
}

pub fn convex_combination(a: &ComplexMatrix, b: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    ComplexMatrix::convex_combination(a, b, t)
}
