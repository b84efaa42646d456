use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::eigen;
use super::hermitian::HermitianMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
///
/// Construction checks that the matrix is square with `n >= 1` and that every
/// entry is finite, so downstream routines never see NaN or infinities.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "matrix dimension must be at least 1"));
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("matrix entry ({}, {})", k / n, k % n),
            });
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from rows; panics on ragged or non-finite input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        Self::new(n, rows.concat()).expect("valid matrix rows")
    }

    /// Builds a matrix from real rows; convenient for tests and small fixtures.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub(crate) fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(n >= 1);
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diagonal(diag: &[Complex64]) -> Self {
        Self::from_fn(diag.len(), |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn scalar(z: Complex64) -> Self {
        Self { n: 1, data: vec![z] }
    }

    /// `z I_n`.
    pub fn scalar_identity(z: Complex64, n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { z } else { ZERO })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.n + j] = z;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    /// `(A + A*) / 2`.
    pub fn real_part(&self) -> HermitianMatrix {
        HermitianMatrix::from_fn(self.n, |i, j| (self.get(i, j) + self.get(j, i).conj()) * 0.5)
    }

    /// `(A - A*) / (2i)`.
    pub fn imag_part(&self) -> HermitianMatrix {
        let half_over_i = Complex64::new(0.0, -0.5);
        HermitianMatrix::from_fn(self.n, |i, j| (self.get(i, j) - self.get(j, i).conj()) * half_over_i)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `A*A`, which is Hermitian positive semidefinite.
    pub fn gram(&self) -> HermitianMatrix {
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                out[i * n + j] = acc;
                out[j * n + i] = acc.conj();
            }
        }
        HermitianMatrix::from_fn(n, |i, j| out[i * n + j])
    }

    /// Largest singular value, computed as `sqrt(lambda_max(A*A))`.
    ///
    /// `tol` is the relative accuracy requested; the tridiagonal bisection
    /// route used here is accurate to a few ulps, so it only gates validation.
    pub fn operator_norm(&self, tol: f64) -> Result<f64> {
        check_tol(tol)?;
        if self.is_zero() {
            return Ok(0.0);
        }
        let (_, top) = eigen::tridiagonal_extremes(&self.gram())?;
        Ok(top.max(0.0).sqrt())
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Entrywise `(1 - t) A + t B`.
    pub fn convex_combination(a: &Self, b: &Self, t: f64) -> Result<Self> {
        a.check_same_dim(b)?;
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid("t", format!("{t} is outside [0, 1]")));
        }
        Ok(Self::lerp(a, b, t))
    }

    pub(crate) fn lerp(a: &Self, b: &Self, t: f64) -> Self {
        let s = 1.0 - t;
        Self {
            n: a.n,
            data: a.data.iter().zip(&b.data).map(|(x, y)| x * s + y * t).collect(),
        }
    }

    /// The `2n x 2n` operator matrix `[[O, X], [Y, O]]`.
    pub fn block_off_diagonal(x: &Self, y: &Self) -> Result<Self> {
        x.check_same_dim(y)?;
        let n = x.n;
        Ok(Self::from_fn(2 * n, |i, j| match (i < n, j < n) {
            (true, false) => x.get(i, j - n),
            (false, true) => y.get(i - n, j),
            _ => ZERO,
        }))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self * other)
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid("tol", format!("{tol} is not a positive finite number")))
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                let z = self.get(i, j);
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix addition");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix subtraction");
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|z| -z).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matrix product");
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                for (out, b) in data[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        ComplexMatrix { n, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, FamilySpec};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn jordan() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    fn max_entry_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).max_abs()
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(matches!(ComplexMatrix::new(0, vec![]), Err(Error::InvalidParameter { .. })));
        assert!(matches!(
            ComplexMatrix::new(2, vec![ZERO; 3]),
            Err(Error::DimensionMismatch { expected: 4, found: 3 })
        ));
        let bad = vec![ZERO, c(f64::NAN, 0.0), ZERO, ZERO];
        assert!(matches!(ComplexMatrix::new(2, bad), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(ComplexMatrix::identity(2).adjoint(), ComplexMatrix::identity(2));
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]);
        assert_eq!(jordan().adjoint(), expected);
        let a = generate(&FamilySpec::new(Family::General, 5, 11)).unwrap();
        assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn real_and_imaginary_parts() {
        let i_scalar = ComplexMatrix::scalar(c(0.0, 1.0));
        assert_eq!(i_scalar.real_part().get(0, 0), ZERO);
        assert_eq!(i_scalar.imag_part().get(0, 0), ONE);

        let re = jordan().real_part();
        assert_eq!(re.get(0, 1), c(0.5, 0.0));
        assert_eq!(re.get(1, 0), c(0.5, 0.0));
        assert_eq!(re.get(0, 0), ZERO);

        // (A - A*)/(2i) for the Jordan block: (1,2) entry is 1/(2i) = -i/2.
        let im = jordan().imag_part();
        assert_eq!(im.get(0, 1), c(0.0, -0.5));
        assert_eq!(im.get(1, 0), c(0.0, 0.5));

        let h = generate(&FamilySpec::new(Family::Hermitian, 4, 3)).unwrap();
        assert!(max_entry_diff(h.real_part().as_matrix(), &h) < 1e-15);
    }

    #[test]
    fn cartesian_decomposition_reassembles() {
        let a = generate(&FamilySpec::new(Family::General, 4, 5)).unwrap();
        let i = c(0.0, 1.0);
        let rebuilt = a.real_part().as_matrix() + &a.imag_part().as_matrix().scale(i);
        assert!(max_entry_diff(&rebuilt, &a) < 1e-12);
    }

    #[test]
    fn operator_norm_examples() {
        assert_abs_diff_eq!(ComplexMatrix::identity(3).operator_norm(1e-12).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(jordan().operator_norm(1e-12).unwrap(), 1.0, epsilon = 1e-14);
        let u = generate(&FamilySpec::new(Family::Unitary, 5, 9)).unwrap();
        assert_abs_diff_eq!(u.operator_norm(1e-12).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(ComplexMatrix::zeros(4).operator_norm(1e-12).unwrap(), 0.0);
        assert!(jordan().operator_norm(0.0).is_err());
    }

    #[test]
    fn operator_norm_of_diagonal_is_max_modulus() {
        let d = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(0.0, 3.0), c(-2.0, 0.5)]);
        assert_abs_diff_eq!(d.operator_norm(1e-12).unwrap(), 3.0, epsilon = 1e-13);
    }

    #[test]
    fn block_off_diagonal_layout() {
        let zero4 = ComplexMatrix::block_off_diagonal(&ComplexMatrix::zeros(2), &ComplexMatrix::zeros(2)).unwrap();
        assert_eq!(zero4, ComplexMatrix::zeros(4));

        let x = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let y = ComplexMatrix::from_real_rows(&[&[5.0, 6.0], &[7.0, 8.0]]);
        let m = ComplexMatrix::block_off_diagonal(&x, &y).unwrap();
        assert_eq!(m.n(), 4);
        assert_eq!(m.get(0, 2), c(1.0, 0.0));
        assert_eq!(m.get(1, 3), c(4.0, 0.0));
        assert_eq!(m.get(2, 0), c(5.0, 0.0));
        assert_eq!(m.get(3, 1), c(8.0, 0.0));
        assert_eq!(m.get(0, 0), ZERO);
        assert_eq!(m.get(3, 3), ZERO);

        let err = ComplexMatrix::block_off_diagonal(&x, &ComplexMatrix::zeros(3));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn convex_combination_examples() {
        let a = generate(&FamilySpec::new(Family::General, 3, 1)).unwrap();
        let b = generate(&FamilySpec::new(Family::General, 3, 2)).unwrap();
        assert_eq!(ComplexMatrix::convex_combination(&a, &b, 0.0).unwrap(), a);
        assert_eq!(ComplexMatrix::convex_combination(&a, &b, 1.0).unwrap(), b);

        let i = ComplexMatrix::identity(3);
        let mid = ComplexMatrix::convex_combination(&i, &(-&i), 0.5).unwrap();
        assert!(mid.is_zero());

        let j = jordan();
        let got = ComplexMatrix::convex_combination(&j, &j.adjoint(), 0.3).unwrap();
        let want = ComplexMatrix::from_real_rows(&[&[0.0, 0.7], &[0.3, 0.0]]);
        assert!(max_entry_diff(&got, &want) < 1e-15);

        assert!(ComplexMatrix::convex_combination(&a, &b, 1.5).is_err());
        assert!(ComplexMatrix::convex_combination(&a, &b, -0.1).is_err());
        assert!(ComplexMatrix::convex_combination(&a, &ComplexMatrix::zeros(2), 0.5).is_err());
    }

    #[test]
    fn matrix_product_matches_hand_computation() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 1.0), c(0.0, 2.0)], vec![c(3.0, 0.0), c(-1.0, 0.0)]]);
        let b = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0), c(1.0, 0.0)], vec![c(2.0, 0.0), c(0.0, -1.0)]]);
        let p = &a * &b;
        // row 0: (1+i)(i) + (2i)(2) = -1 + 5i ; (1+i)(1) + (2i)(-i) = 3 + i
        assert_eq!(p.get(0, 0), c(-1.0, 5.0));
        assert_eq!(p.get(0, 1), c(3.0, 1.0));
        assert_eq!(p.get(1, 0), c(-2.0, 3.0));
        assert_eq!(p.get(1, 1), c(3.0, 1.0));
    }
}
