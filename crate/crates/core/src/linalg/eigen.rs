//! Hermitian eigenvalue engines.
//!
//! Two independent routes are provided:
//!
//! * [`hermitian_eigenvalues`] / [`hermitian_eigen_extremes`]: cyclic complex
//!   Jacobi sweeps. Unconditionally convergent and accurate, but every sweep
//!   costs `O(n^3)` with a large constant.
//! * [`tridiagonal_extremes`]: Householder reduction to a real symmetric
//!   tridiagonal matrix followed by Sturm-sequence bisection for the two
//!   extreme eigenvalues. Roughly an order of magnitude cheaper, which matters
//!   inside the angle sweeps of the numerical radius.
//!
//! The test suite checks the two routes against each other.

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::hermitian::HermitianMatrix;
use super::matrix::check_tol;

/// Sweep cap for the Jacobi solver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// All eigenvalues (ascending) by cyclic Jacobi rotations.
///
/// Iterates until the off-diagonal Frobenius norm falls below
/// `tol * ||H||_F / sqrt(n)`; by Weyl's inequality the diagonal then carries
/// every eigenvalue to within `tol * spectral_radius`.
pub fn hermitian_eigenvalues(h: &HermitianMatrix, tol: f64) -> Result<Vec<f64>> {
    check_tol(tol)?;
    let n = h.n();
    let mut a: Vec<Complex64> = h.as_matrix().data().to_vec();
    let fro = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if fro == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let threshold = tol * fro / (n as f64).sqrt();

    let off_norm = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += 2.0 * a[i * n + j].norm_sqr();
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off_norm(&a) > threshold {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                method: "cyclic Jacobi",
                n,
                cap: JACOBI_MAX_SWEEPS,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, n, p, q);
            }
        }
        sweeps += 1;
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
fn rotate(a: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    // Rotate the phase of row/column q so the (p, q) entry becomes real and
    // positive, then apply a real symmetric Jacobi rotation.
    let phase = apq / b;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let theta = 0.5 * (aqq - app) / b;
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase_conj = phase.conj();

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k * n + p];
        let akq = a[k * n + q] * phase_conj;
        let new_kp = akp * c - akq * s;
        let new_kq = akp * s + akq * c;
        a[k * n + p] = new_kp;
        a[p * n + k] = new_kp.conj();
        // Undo the phase on column q so the stored matrix stays in the
        // original basis up to the rotation itself.
        a[k * n + q] = new_kq * phase;
        a[q * n + k] = (new_kq * phase).conj();
    }
    a[p * n + p] = Complex64::new(app - t * b, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * b, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
}

/// `(lambda_min, lambda_max)` by cyclic Jacobi.
///
/// Absolute error is at most `tol * max(1, spectral_radius)`. Fails with
/// [`Error::NoConvergence`] if the sweep cap is exhausted.
pub fn hermitian_eigen_extremes(h: &HermitianMatrix, tol: f64) -> Result<(f64, f64)> {
    let eig = hermitian_eigenvalues(h, tol)?;
    Ok((eig[0], eig[eig.len() - 1]))
}

/// `(lambda_min, lambda_max)` via Householder tridiagonalization and bisection.
pub fn tridiagonal_extremes(h: &HermitianMatrix) -> Result<(f64, f64)> {
    let n = h.n();
    let mut ws = Workspace::new(n);
    ws.a.copy_from_slice(h.as_matrix().data());
    ws.extremes()
}

/// Reusable buffers for repeated extreme-eigenvalue solves of one size.
///
/// Callers fill `a` with a Hermitian matrix in full row-major storage and
/// call [`Workspace::extremes`]. The buffer is overwritten.
pub(crate) struct Workspace {
    n: usize,
    pub(crate) a: Vec<Complex64>,
    v: Vec<Complex64>,
    p: Vec<Complex64>,
    d: Vec<f64>,
    e2: Vec<f64>,
}

impl Workspace {
    pub(crate) fn new(n: usize) -> Self {
        Self {
            n,
            a: vec![Complex64::new(0.0, 0.0); n * n],
            v: vec![Complex64::new(0.0, 0.0); n],
            p: vec![Complex64::new(0.0, 0.0); n],
            d: vec![0.0; n],
            e2: vec![0.0; n.saturating_sub(1)],
        }
    }

    pub(crate) fn extremes(&mut self) -> Result<(f64, f64)> {
        if self.a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "Hermitian eigenvalue input".into(),
            });
        }
        self.tridiagonalize();
        Ok(self.bisect_extremes())
    }

    fn tridiagonalize(&mut self) {
        let n = self.n;
        let a = &mut self.a;
        for k in 0..n.saturating_sub(2) {
            self.d[k] = a[k * n + k].re;
            let m = n - k - 1;
            let mut alpha2 = 0.0;
            for i in 0..m {
                alpha2 += a[(k + 1 + i) * n + k].norm_sqr();
            }
            if alpha2 == 0.0 {
                self.e2[k] = 0.0;
                continue;
            }
            let alpha = alpha2.sqrt();
            let x0 = a[(k + 1) * n + k];
            let x0_abs = x0.norm();
            let phase = if x0_abs > 0.0 { x0 / x0_abs } else { Complex64::new(1.0, 0.0) };
            let v = &mut self.v[..m];
            for (i, vi) in v.iter_mut().enumerate() {
                *vi = a[(k + 1 + i) * n + k];
            }
            v[0] += phase * alpha;
            let tau = 1.0 / (alpha * (alpha + x0_abs));

            // p = tau * H22 v, using the full trailing block.
            let p = &mut self.p[..m];
            let mut vp = 0.0;
            for i in 0..m {
                let row = (k + 1 + i) * n + k + 1;
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..m {
                    acc += a[row + j] * v[j];
                }
                p[i] = acc * tau;
                vp += (v[i].conj() * p[i]).re;
            }
            let half = 0.5 * tau * vp;
            for i in 0..m {
                p[i] -= v[i] * half;
            }
            // H22 -= v w* + w v*
            for i in 0..m {
                let row = (k + 1 + i) * n + k + 1;
                let (vi, wi) = (v[i], p[i]);
                for j in 0..m {
                    a[row + j] -= vi * p[j].conj() + wi * v[j].conj();
                }
            }
            self.e2[k] = alpha2;
        }
        if n >= 2 {
            self.d[n - 2] = a[(n - 2) * n + n - 2].re;
            self.e2[n - 2] = a[(n - 1) * n + n - 2].norm_sqr();
        }
        self.d[n - 1] = a[(n - 1) * n + n - 1].re;
    }

    /// Number of eigenvalues of the tridiagonal matrix strictly below `x`.
    fn count_below(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut q = self.d[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.n {
            q = self.d[i] - x - self.e2[i - 1] / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn bisect_extremes(&self) -> (f64, f64) {
        let n = self.n;
        if self.e2.iter().all(|&e| e == 0.0) {
            let lo = self.d.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = self.d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            return (lo, hi);
        }
        let e = |i: usize| if i < n - 1 { self.e2[i].sqrt() } else { 0.0 };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = e(i) + if i > 0 { e(i - 1) } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        let scale = lo.abs().max(hi.abs());
        let max_e2 = self.e2.iter().copied().fold(1.0, f64::max);
        let pivmin = f64::MIN_POSITIVE * max_e2;
        let pad = 2.0 * f64::EPSILON * scale + pivmin;
        lo -= pad;
        hi += pad;

        let width_ok = |l: f64, h: f64| h - l <= 2.0 * f64::EPSILON * (l.abs() + h.abs()) + pivmin;

        // lambda_max: smallest x with count_below(x) == n.
        let (mut l, mut h) = (lo, hi);
        while !width_ok(l, h) {
            let mid = 0.5 * (l + h);
            if mid <= l || mid >= h {
                break;
            }
            if self.count_below(mid, pivmin) == n {
                h = mid;
            } else {
                l = mid;
            }
        }
        let top = 0.5 * (l + h);

        // lambda_min: largest x with count_below(x) == 0.
        let (mut l, mut h) = (lo, hi);
        while !width_ok(l, h) {
            let mid = 0.5 * (l + h);
            if mid <= l || mid >= h {
                break;
            }
            if self.count_below(mid, pivmin) >= 1 {
                h = mid;
            } else {
                l = mid;
            }
        }
        let bottom = 0.5 * (l + h);
        (bottom, top)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family, FamilySpec};
    use crate::linalg::ComplexMatrix;
    use approx::assert_abs_diff_eq;
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn herm(a: &ComplexMatrix) -> HermitianMatrix {
        HermitianMatrix::new(a.clone())
    }

    #[test]
    fn diagonal_extremes() {
        let d = ComplexMatrix::from_real_rows(&[&[-3.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 5.0]]);
        let (lo, hi) = hermitian_eigen_extremes(&herm(&d), 1e-12).unwrap();
        assert_eq!((lo, hi), (-3.0, 5.0));
        let (lo, hi) = tridiagonal_extremes(&herm(&d)).unwrap();
        assert_eq!((lo, hi), (-3.0, 5.0));
    }

    #[test]
    fn two_by_two_closed_form() {
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]);
        let (lo, hi) = hermitian_eigen_extremes(&herm(&h), 1e-12).unwrap();
        assert_abs_diff_eq!(lo, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 0.5, epsilon = 1e-14);

        // Complex off-diagonal: eigenvalues are +-|h12|.
        let z = Complex64::new(0.3, -0.4);
        let h = ComplexMatrix::from_rows(&[vec![Complex64::new(0.0, 0.0), z], vec![z.conj(), Complex64::new(0.0, 0.0)]]);
        let (lo, hi) = hermitian_eigen_extremes(&herm(&h), 1e-12).unwrap();
        assert_abs_diff_eq!(lo, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn zero_matrix_gives_exact_zero() {
        let z = herm(&ComplexMatrix::zeros(5));
        assert_eq!(hermitian_eigen_extremes(&z, 1e-12).unwrap(), (0.0, 0.0));
        assert_eq!(tridiagonal_extremes(&z).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn rejects_bad_tolerance() {
        let z = herm(&ComplexMatrix::identity(2));
        assert!(hermitian_eigen_extremes(&z, 0.0).is_err());
        assert!(hermitian_eigen_extremes(&z, f64::NAN).is_err());
    }

    #[test]
    fn jacobi_and_tridiagonal_routes_agree() {
        for n in [1, 2, 3, 5, 8, 16, 32] {
            for seed in 0..6 {
                let h = generate(&FamilySpec::new(Family::Hermitian, n, seed)).unwrap();
                let h = herm(&h);
                let (jl, jh) = hermitian_eigen_extremes(&h, 1e-14).unwrap();
                let (tl, th) = tridiagonal_extremes(&h).unwrap();
                let scale = jl.abs().max(jh.abs()).max(1.0);
                assert!((jl - tl).abs() <= 1e-12 * scale, "n={n} seed={seed}: {jl} vs {tl}");
                assert!((jh - th).abs() <= 1e-12 * scale, "n={n} seed={seed}: {jh} vs {th}");
            }
        }
    }

    #[test]
    fn jacobi_eigenvalues_preserve_trace_and_frobenius() {
        let h = herm(&generate(&FamilySpec::new(Family::Hermitian, 7, 21)).unwrap());
        let eig = hermitian_eigenvalues(&h, 1e-14).unwrap();
        let trace: f64 = (0..7).map(|i| h.get(i, i).re).sum();
        assert_abs_diff_eq!(eig.iter().sum::<f64>(), trace, epsilon = 1e-12);
        let fro2 = h.as_matrix().frobenius_norm().powi(2);
        assert_abs_diff_eq!(eig.iter().map(|x| x * x).sum::<f64>(), fro2, epsilon = 1e-11);
    }

    fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
        let u1 = ((rng.next_u64() >> 11) as f64 + 1.0) / (1u64 << 53) as f64;
        let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    // Rayleigh quotients never exceed lambda_max, and the best of many random
    // probes comes close to it.
    #[test]
    fn lambda_max_matches_rayleigh_sampling() {
        let n = 6;
        let h = herm(&generate(&FamilySpec::new(Family::Hermitian, n, 77)).unwrap());
        let tol = 1e-12;
        let (_, top) = hermitian_eigen_extremes(&h, tol).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4242);
        let mut best = f64::NEG_INFINITY;
        for _ in 0..100_000 {
            let x: Vec<Complex64> = (0..n).map(|_| Complex64::new(gaussian(&mut rng), gaussian(&mut rng))).collect();
            let norm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            let mut q = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    q += x[i].conj() * h.get(i, j) * x[j];
                }
            }
            best = best.max(q.re / norm2);
        }
        let scale = top.abs().max(1.0);
        assert!(best <= top + tol * scale, "Rayleigh quotient {best} exceeds lambda_max {top}");
        // Sampling slack: a random direction in C^6 rarely aligns closely with
        // the top eigenvector, so only require the gap to be small relative
        // to the spread of the spectrum.
        let (bottom, _) = hermitian_eigen_extremes(&h, tol).unwrap();
        assert!(top - best <= 0.1 * (top - bottom), "best probe {best} too far below {top}");
    }
}
