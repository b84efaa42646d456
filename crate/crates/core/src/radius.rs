//! Numerical radius through the rotated Hermitian parts.
//!
//! `h(phi) = lambda_max(Re(e^{i phi} A))` is the support function of the
//! numerical range `W(A)` and `w(A) = max_phi h(phi)`. One eigenvalue solve
//! at `phi` yields both `h(phi)` and `h(phi + pi) = -lambda_min`.
//!
//! The search samples `h` on a uniform grid and then runs a cutting-angle
//! branch and bound. For adjacent angles `phi_1 < phi_2`, `W(A)` lies in the
//! wedge cut out by the two support lines `Re(e^{i phi_k} z) = h(phi_k)`, so
//! `h` on `[phi_1, phi_2]` is bounded by the support function of the wedge:
//! `|v|` if the wedge apex `v` faces into the interval, the larger endpoint
//! value otherwise. Intervals are split at the apex direction until no bound
//! exceeds the best value found by more than a relative gap.
//!
//! For block operator matrices `M = [[O, X], [Y, O]]` the rotated real part
//! is `[[O, Z], [Z*, O]]` with `Z = (e^{i phi} X + e^{-i phi} Y*) / 2`, whose
//! eigenvalues are `+-sigma(Z)`. Hence `h_M(phi) = ||e^{2 i phi} X + Y*|| / 2`,
//! which only needs `n x n` solves instead of `2n x 2n` ones.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::eigen::Workspace;
use crate::linalg::{check_tol, ComplexMatrix};
use crate::quadrature::gauss_legendre_rule;

/// Search parameters for the angle maximization.
#[derive(Clone, Debug, PartialEq)]
pub struct RadiusConfig {
    /// Number of uniformly spaced angles over `[0, 2 pi)`; half as many
    /// eigenvalue solves are needed.
    pub grid: usize,
    /// Stop once no interval bound exceeds the best value by more than
    /// `rel_gap * best`.
    pub rel_gap: f64,
    /// Intervals narrower than this are not split further.
    pub min_width: f64,
    /// Hard cap on eigenvalue solves spent after the grid.
    pub max_refinements: usize,
}

impl Default for RadiusConfig {
    fn default() -> Self {
        Self {
            grid: 720,
            rel_gap: 1e-12,
            min_width: 1e-12,
            max_refinements: 5000,
        }
    }
}

impl RadiusConfig {
    /// Cheaper grid used for integrands that are evaluated hundreds of times.
    /// The branch and bound keeps the result certified to the same gap.
    pub fn coarse() -> Self {
        Self::with_grid(16)
    }

    pub fn with_grid(grid: usize) -> Self {
        Self {
            grid,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.grid < 4 || !self.grid.is_multiple_of(2) {
            return Err(Error::invalid("grid", format!("{} must be an even number >= 4", self.grid)));
        }
        if !(self.rel_gap >= 0.0) {
            return Err(Error::invalid("rel_gap", "must be non-negative"));
        }
        if !(self.min_width > 0.0) {
            return Err(Error::invalid("min_width", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadiusResult {
    pub value: f64,
    /// Angle in `[0, 2 pi)` at which `lambda_max(Re(e^{i theta} A))` attains `value`.
    pub argmax_theta: f64,
    /// Number of Hermitian eigenvalue solves used.
    pub evaluations: usize,
    /// Largest remaining upper bound on `w(A)` when the search stopped
    /// (up to eigenvalue rounding).
    pub upper_bound: f64,
}

pub fn numerical_radius(a: &ComplexMatrix, tol: f64) -> Result<RadiusResult> {
    numerical_radius_with(a, tol, &RadiusConfig::default())
}

pub fn numerical_radius_with(a: &ComplexMatrix, tol: f64, config: &RadiusConfig) -> Result<RadiusResult> {
    check_tol(tol)?;
    config.validate()?;
    if a.is_zero() {
        return Ok(RadiusResult {
            value: 0.0,
            argmax_theta: 0.0,
            evaluations: 0,
            upper_bound: 0.0,
        });
    }
    let mut objective = RotatedRealPart::new(a);
    maximize(&mut objective, config)
}

/// `w([[O, X], [Y, O]])`.
pub fn omega_off_diag(x: &ComplexMatrix, y: &ComplexMatrix, tol: f64) -> Result<f64> {
    omega_off_diag_with(x, y, tol, &RadiusConfig::default())
}

pub fn omega_off_diag_with(x: &ComplexMatrix, y: &ComplexMatrix, tol: f64, config: &RadiusConfig) -> Result<f64> {
    check_tol(tol)?;
    config.validate()?;
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch {
            expected: x.n(),
            found: y.n(),
        });
    }
    if x.is_zero() && y.is_zero() {
        return Ok(0.0);
    }
    let mut objective = OffDiagonalBlock::new(x, y);
    Ok(maximize(&mut objective, config)?.value)
}

/// Support function of a numerical range, sampled in antipodal pairs.
trait SupportFunction {
    /// Returns `(h(phi), h(phi + pi))`.
    fn eval(&mut self, phi: f64) -> Result<(f64, f64)>;
}

/// `Re(e^{i phi} A) = cos(phi) Re A - sin(phi) Im A`.
struct RotatedRealPart {
    n: usize,
    re: Vec<Complex64>,
    im: Vec<Complex64>,
    ws: Workspace,
}

impl RotatedRealPart {
    fn new(a: &ComplexMatrix) -> Self {
        let n = a.n();
        Self {
            n,
            re: a.real_part().into_matrix().data().to_vec(),
            im: a.imag_part().into_matrix().data().to_vec(),
            ws: Workspace::new(n),
        }
    }
}

impl SupportFunction for RotatedRealPart {
    fn eval(&mut self, phi: f64) -> Result<(f64, f64)> {
        let (s, c) = phi.sin_cos();
        for ((dst, h), k) in self.ws.a.iter_mut().zip(&self.re).zip(&self.im) {
            *dst = h * c - k * s;
        }
        let (lo, hi) = if self.n == 1 {
            let v = self.ws.a[0].re;
            (v, v)
        } else {
            self.ws.extremes()?
        };
        Ok((hi, -lo))
    }
}

/// `||e^{2 i phi} X + Y*|| / 2` via the Gram matrix
/// `X*X + Y Y* + e^{2 i phi} Y X + (e^{2 i phi} Y X)*`.
struct OffDiagonalBlock {
    n: usize,
    gram: Vec<Complex64>,
    cross: Vec<Complex64>,
    ws: Workspace,
}

impl OffDiagonalBlock {
    fn new(x: &ComplexMatrix, y: &ComplexMatrix) -> Self {
        let n = x.n();
        let yy = y.adjoint().gram();
        let gram = (x.gram().as_matrix() + yy.as_matrix()).data().to_vec();
        let cross = (y * x).data().to_vec();
        Self {
            n,
            gram,
            cross,
            ws: Workspace::new(n),
        }
    }
}

impl SupportFunction for OffDiagonalBlock {
    fn eval(&mut self, phi: f64) -> Result<(f64, f64)> {
        let n = self.n;
        let phase = Complex64::from_polar(1.0, 2.0 * phi);
        for i in 0..n {
            for j in 0..n {
                let q = self.cross[i * n + j] * phase + (self.cross[j * n + i] * phase).conj();
                self.ws.a[i * n + j] = self.gram[i * n + j] + q;
            }
        }
        let top = if n == 1 { self.ws.a[0].re } else { self.ws.extremes()?.1 };
        let g = 0.5 * top.max(0.0).sqrt();
        Ok((g, g))
    }
}

struct Best {
    value: f64,
    phi: f64,
}

impl Best {
    fn offer(&mut self, value: f64, phi: f64) {
        let phi = phi.rem_euclid(TAU);
        if value > self.value || (value == self.value && phi < self.phi) {
            self.value = value;
            self.phi = phi;
        }
    }
}

struct Interval {
    lo: f64,
    hi: f64,
    h_lo: f64,
    h_hi: f64,
    bound: f64,
    cut: f64,
}

impl Interval {
    fn new(lo: f64, hi: f64, h_lo: f64, h_hi: f64) -> Self {
        let (bound, cut) = wedge_bound(lo, hi, h_lo, h_hi);
        Self {
            lo,
            hi,
            h_lo,
            h_hi,
            bound,
            cut,
        }
    }
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// Upper bound of a support function on `[lo, hi]` (`hi - lo < pi`) from its
/// endpoint values, and the angle at which the bound is attained.
fn wedge_bound(lo: f64, hi: f64, h_lo: f64, h_hi: f64) -> (f64, f64) {
    let endpoint = (h_lo.max(h_hi), 0.5 * (lo + hi));
    let (s1, c1) = lo.sin_cos();
    let (s2, c2) = hi.sin_cos();
    // Solve x cos(phi_k) - y sin(phi_k) = h_k for the apex v = x + iy.
    let det = s1 * c2 - c1 * s2;
    if det.abs() < 1e-300 {
        return endpoint;
    }
    let x = (s1 * h_hi - s2 * h_lo) / det;
    let y = (c1 * h_hi - c2 * h_lo) / det;
    // Re(e^{i phi} v) peaks at phi = -arg(v).
    let facing = lo + (-y.atan2(x) - lo).rem_euclid(TAU);
    if facing <= hi {
        (x.hypot(y).max(endpoint.0), facing)
    } else {
        endpoint
    }
}

fn maximize(support: &mut dyn SupportFunction, config: &RadiusConfig) -> Result<RadiusResult> {
    let k = config.grid;
    let m = k / 2;
    let step = TAU / k as f64;

    let mut samples = vec![0.0; k];
    for j in 0..m {
        let (front, back) = support.eval(j as f64 * step)?;
        samples[j] = front;
        samples[j + m] = back;
    }
    let mut evaluations = m;

    let mut best = Best {
        value: f64::NEG_INFINITY,
        phi: 0.0,
    };
    for (j, &v) in samples.iter().enumerate() {
        best.offer(v, j as f64 * step);
    }
    let lowest = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = best.value.abs().max(f64::MIN_POSITIVE);

    let mut upper_bound = best.value;
    // A support function that is constant on the grid belongs to a disk
    // centred at the origin (up to rounding); bounding every interval would
    // only rediscover that.
    if best.value - lowest > 1e-12 * scale {
        let mut queue: BinaryHeap<Interval> = (0..k)
            .map(|j| {
                let hi = if j + 1 == k { TAU } else { (j + 1) as f64 * step };
                Interval::new(j as f64 * step, hi, samples[j], samples[(j + 1) % k])
            })
            .collect();
        let mut spent = 0;
        while let Some(iv) = queue.pop() {
            let gap = config.rel_gap * best.value.abs();
            if iv.bound <= best.value + gap {
                break;
            }
            if spent >= config.max_refinements {
                upper_bound = upper_bound.max(iv.bound);
                break;
            }
            let width = iv.hi - iv.lo;
            let phi = iv.cut.clamp(iv.lo + 0.05 * width, iv.hi - 0.05 * width);
            let (front, back) = support.eval(phi)?;
            spent += 1;
            best.offer(front, phi);
            best.offer(back, phi + PI);
            for child in [
                Interval::new(iv.lo, phi, iv.h_lo, front),
                Interval::new(phi, iv.hi, front, iv.h_hi),
            ] {
                if child.hi - child.lo < config.min_width {
                    upper_bound = upper_bound.max(child.bound);
                } else if child.bound > best.value + config.rel_gap * best.value.abs() {
                    queue.push(child);
                }
            }
        }
        evaluations += spent;
    }

    Ok(RadiusResult {
        value: best.value.max(0.0),
        argmax_theta: best.phi,
        evaluations,
        upper_bound: upper_bound.max(best.value).max(0.0),
    })
}

/// `int_0^1 |(1 - t) a + t b| dt` for complex scalars.
///
/// Writing `|(1-t)a + tb| = |b - a| sqrt((t + p)^2 + q^2)` with
/// `p = Re(conj(a)(b - a)) / |b - a|^2` and `q = |Im(conj(a)(b - a))| / |b - a|^2`,
/// the antiderivative of `sqrt(u^2 + q^2)` is
/// `(u sqrt(u^2 + q^2) + q^2 asinh(u / q)) / 2`, degenerating to `u|u|/2` when
/// the segment is collinear with the origin. When the origin is far from the
/// segment relative to its length the antiderivative difference cancels
/// badly; the integrand is then analytic well beyond `[0, 1]` and a 32-point
/// Gauss-Legendre rule is exact to rounding.
pub fn scalar_integral_modulus(a: Complex64, b: Complex64) -> f64 {
    match closed_form_parameters(a, b) {
        Some((_, p, q)) if p * p + q * q > 16.0 => scalar_modulus_by_quadrature(a, b),
        _ => scalar_modulus_closed_form(a, b),
    }
}

/// `(|b - a|, p, q)`, or `None` when `a == b`.
fn closed_form_parameters(a: Complex64, b: Complex64) -> Option<(f64, f64, f64)> {
    let diff = b - a;
    let alpha = diff.norm_sqr();
    if alpha == 0.0 {
        return None;
    }
    let z = a.conj() * diff;
    Some((alpha.sqrt(), z.re / alpha, z.im.abs() / alpha))
}

fn surd_antiderivative(u: f64, q: f64) -> f64 {
    if q == 0.0 {
        0.5 * u * u.abs()
    } else {
        0.5 * (u * u.hypot(q) + q * q * (u / q).asinh())
    }
}

pub(crate) fn scalar_modulus_closed_form(a: Complex64, b: Complex64) -> f64 {
    match closed_form_parameters(a, b) {
        None => a.norm(),
        Some((len, p, q)) => len * (surd_antiderivative(1.0 + p, q) - surd_antiderivative(p, q)),
    }
}

pub(crate) fn scalar_modulus_by_quadrature(a: Complex64, b: Complex64) -> f64 {
    let rule = gauss_legendre_rule(32).expect("32-point rule");
    let terms: Vec<f64> = rule
        .gl_nodes()
        .iter()
        .zip(rule.gl_weights())
        .map(|(&t, &w)| w * (a * (1.0 - t) + b * t).norm())
        .collect();
    crate::quadrature::pairwise_sum(&terms)
}
