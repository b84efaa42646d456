//! Seeded random matrix families.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). A `FamilySpec` seed keys
//! the generator and each random component of a construction reads its own
//! ChaCha stream (see the `STREAM_*` constants). Within a stream, the k-th
//! complex Gaussian (row-major entry index for matrices) consumes the two
//! 64-bit words `2k` and `2k + 1`, turned into independent standard normal
//! real and imaginary parts by the Box-Muller transform. Output is therefore
//! bit-identical across platforms for a fixed `FamilySpec`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

const STREAM_PRIMARY: u64 = 0;
const STREAM_SECONDARY: u64 = 1;
const STREAM_SPECTRUM: u64 = 2;
const STREAM_SCALE: u64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    General,
    Hermitian,
    SkewHermitian,
    Normal,
    Unitary,
    NilpotentSquareZero,
    RankOne,
    Scalar,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::General,
        Family::Hermitian,
        Family::SkewHermitian,
        Family::Normal,
        Family::Unitary,
        Family::NilpotentSquareZero,
        Family::RankOne,
        Family::Scalar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::General => "general",
            Family::Hermitian => "hermitian",
            Family::SkewHermitian => "skew_hermitian",
            Family::Normal => "normal",
            Family::Unitary => "unitary",
            Family::NilpotentSquareZero => "nilpotent_square_zero",
            Family::RankOne => "rank_one",
            Family::Scalar => "scalar",
        }
    }

    pub fn min_dimension(self) -> usize {
        match self {
            Family::NilpotentSquareZero => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        if s == "nilpotent" {
            return Ok(Family::NilpotentSquareZero);
        }
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::invalid("family", format!("unknown family `{s}`")))
    }
}

/// Construction used for square-zero matrices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NilpotentForm {
    /// `x y*` with `y` orthogonalized against `x`.
    #[default]
    RankOne,
    /// `V [[O, B], [O, O]] V*` with a Haar unitary `V`.
    Block,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    /// Target spectral scale: the operator norm is drawn log-uniformly from
    /// `[scale / 2, 2 scale]`. Unitary matrices ignore it.
    pub scale: f64,
    pub nilpotent_form: NilpotentForm,
}

impl FamilySpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self {
            family,
            n,
            seed,
            scale: 1.0,
            nilpotent_form: NilpotentForm::default(),
        }
    }

    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_nilpotent_form(mut self, form: NilpotentForm) -> Self {
        self.nilpotent_form = form;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n < self.family.min_dimension() {
            return Err(Error::invalid(
                "n",
                format!("{} needs n >= {}, got {}", self.family, self.family.min_dimension(), self.n),
            ));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::invalid("scale", format!("{} must be positive and finite", self.scale)));
        }
        Ok(())
    }
}

/// Complex standard normals from one ChaCha stream.
struct GaussianStream(ChaCha8Rng);

impl GaussianStream {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self(rng)
    }

    fn uniform(&mut self) -> f64 {
        // 53 random bits scaled to [0, 1).
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next(&mut self) -> Complex64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        Complex64::from_polar(r, std::f64::consts::TAU * u2)
    }

    fn vector(&mut self, len: usize) -> Vec<Complex64> {
        (0..len).map(|_| self.next()).collect()
    }

    fn matrix(&mut self, n: usize) -> ComplexMatrix {
        ComplexMatrix::new(n, self.vector(n * n)).expect("finite Gaussian entries")
    }
}

/// Haar-distributed unitary: Householder QR of a Ginibre matrix with the
/// phases of `R`'s diagonal moved into `Q`.
fn haar_unitary(g: &ComplexMatrix) -> ComplexMatrix {
    let n = g.n();
    let mut r: Vec<Complex64> = g.data().to_vec();
    let mut q = ComplexMatrix::identity(n).data().to_vec();
    let mut phases = vec![Complex64::new(1.0, 0.0); n];
    for k in 0..n {
        let norm = (k..n).map(|i| r[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r[k * n + k];
        let phase = if x0 == Complex64::new(0.0, 0.0) {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // Reflect x onto alpha e_1 with alpha = -phase |x| (no cancellation).
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..n).map(|i| r[i * n + k]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        phases[k] = alpha / alpha.norm();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // R <- (I - 2 v v*) R on rows k..n.
        for j in 0..n {
            let dot: Complex64 = (k..n).map(|i| v[i - k].conj() * r[i * n + j]).sum();
            for i in k..n {
                r[i * n + j] -= v[i - k] * dot * 2.0;
            }
        }
        // Q <- Q (I - 2 v v*) on columns k..n.
        for i in 0..n {
            let dot: Complex64 = (k..n).map(|j| q[i * n + j] * v[j - k]).sum();
            for j in k..n {
                q[i * n + j] -= dot * v[j - k].conj() * 2.0;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            q[i * n + j] *= phases[j];
        }
    }
    ComplexMatrix::new(n, q).expect("finite unitary")
}

fn hermitian_from(g: &ComplexMatrix) -> ComplexMatrix {
    g.real_part().into_matrix()
}

pub fn generate(spec: &FamilySpec) -> Result<ComplexMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut primary = GaussianStream::new(spec.seed, STREAM_PRIMARY);
    let mut secondary = GaussianStream::new(spec.seed, STREAM_SECONDARY);

    let a = match spec.family {
        Family::General => primary.matrix(n),
        Family::Hermitian => hermitian_from(&primary.matrix(n)),
        Family::SkewHermitian => hermitian_from(&primary.matrix(n)).scale(Complex64::new(0.0, 1.0)),
        Family::Normal | Family::Unitary => {
            let u = haar_unitary(&primary.matrix(n));
            if spec.family == Family::Unitary {
                return Ok(u);
            }
            let spectrum = GaussianStream::new(spec.seed, STREAM_SPECTRUM).vector(n);
            let d = ComplexMatrix::diagonal(&spectrum);
            &(&u * &d) * &u.adjoint()
        }
        Family::NilpotentSquareZero => match spec.nilpotent_form {
            NilpotentForm::RankOne => {
                let x = primary.vector(n);
                let mut y = secondary.vector(n);
                let xx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
                let xy: Complex64 = x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum();
                for (yi, xi) in y.iter_mut().zip(&x) {
                    *yi -= xi * (xy / xx);
                }
                outer(&x, &y)
            }
            NilpotentForm::Block => {
                let k = n / 2;
                let g = primary.matrix(n);
                let b = ComplexMatrix::from_fn(n, |i, j| if i < k && j >= k { g.get(i, j) } else { Complex64::new(0.0, 0.0) });
                let v = haar_unitary(&secondary.matrix(n));
                &(&v * &b) * &v.adjoint()
            }
        },
        Family::RankOne => outer(&primary.vector(n), &secondary.vector(n)),
        Family::Scalar => ComplexMatrix::scalar_identity(primary.next(), n),
    };

    let norm = a.operator_norm(1e-12)?;
    if norm == 0.0 {
        return Ok(a);
    }
    let mut scale_rng = GaussianStream::new(spec.seed, STREAM_SCALE);
    let target = spec.scale * 2f64.powf(2.0 * scale_rng.uniform() - 1.0);
    Ok(a.scale_real(target / norm))
}

fn outer(x: &[Complex64], y: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(x.len(), |i, j| x[i] * y[j].conj())
}

/// Relative Frobenius residual of the relation that defines `family`.
///
/// The zero matrix belongs to every family except the unitary one.
pub fn family_residual(a: &ComplexMatrix, family: Family) -> f64 {
    let f = a.frobenius_norm();
    let n = a.n();
    if family == Family::Unitary {
        let defect = &(&a.adjoint() * a) - &ComplexMatrix::identity(n);
        return defect.frobenius_norm() / (n as f64).sqrt();
    }
    if f == 0.0 {
        return 0.0;
    }
    match family {
        Family::General => 0.0,
        Family::Hermitian => (a - &a.adjoint()).frobenius_norm() / f,
        Family::SkewHermitian => (a + &a.adjoint()).frobenius_norm() / f,
        Family::Normal => {
            let ah = a.adjoint();
            (&(&ah * a) - &(a * &ah)).frobenius_norm() / (f * f)
        }
        Family::Unitary => unreachable!(),
        Family::NilpotentSquareZero => (a * a).frobenius_norm() / (f * f),
        Family::RankOne => {
            // Every 2x2 minor of a rank-one matrix vanishes.
            let mut sum = 0.0;
            for i in 0..n {
                for k in (i + 1)..n {
                    for j in 0..n {
                        for l in (j + 1)..n {
                            sum += (a.get(i, j) * a.get(k, l) - a.get(i, l) * a.get(k, j)).norm_sqr();
                        }
                    }
                }
            }
            sum.sqrt() / (f * f)
        }
        Family::Scalar => {
            let mean = (0..n).map(|i| a.get(i, i)).sum::<Complex64>() / n as f64;
            (a - &ComplexMatrix::scalar_identity(mean, n)).frobenius_norm() / f
        }
    }
}
