//! Integrals over `[0, 1]` with two-sided brackets for convex integrands.
//!
//! The point estimate is Gauss-Legendre. For a convex `f` each panel
//! satisfies `f(mid) <= mean(f) <= (f(left) + f(right)) / 2`, so the composite
//! midpoint and trapezoid sums enclose the integral whatever the smoothness.
//! Gauss-Legendre converges only like `m^-2` across a kink, so the point
//! estimate is clamped into the enclosure.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{check_tol, ComplexMatrix};
use crate::radius::{numerical_radius_with, omega_off_diag_with, RadiusConfig};

pub const MAX_GL_POINTS: usize = 512;
pub const DEFAULT_GL_POINTS: usize = 64;
pub const DEFAULT_BRACKET_PANELS: usize = 64;

const NEWTON_CAP: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    gl_nodes: Vec<f64>,
    gl_weights: Vec<f64>,
    pub bracket_panels: usize,
}

impl QuadratureRule {
    /// Ascending nodes in `(0, 1)`.
    pub fn gl_nodes(&self) -> &[f64] {
        &self.gl_nodes
    }

    pub fn gl_weights(&self) -> &[f64] {
        &self.gl_weights
    }

    pub fn points(&self) -> usize {
        self.gl_nodes.len()
    }

    pub fn with_panels(mut self, panels: usize) -> Self {
        self.bracket_panels = panels;
        self
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        gauss_legendre_rule(DEFAULT_GL_POINTS).expect("default rule")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub n_evals: usize,
}

impl IntegralEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// `m`-point Gauss-Legendre rule mapped to `[0, 1]`.
///
/// Roots of `P_m` come from Newton's method on the three-term recurrence;
/// only the lower half is computed and mirrored, so the rule is exactly
/// symmetric about `1/2`.
pub fn gauss_legendre_rule(m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > MAX_GL_POINTS {
        return Err(Error::invalid("m", format!("{m} is outside 1..={MAX_GL_POINTS}")));
    }
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        // Tricomi's estimate of the i-th largest root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_CAP {
            let (p, d) = legendre_with_derivative(m, x);
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                method: "Gauss-Legendre Newton iteration",
                n: m,
                cap: NEWTON_CAP,
            });
        }
        let dp = legendre_with_derivative(m, x).1;
        let w = 1.0 / ((1.0 - x * x) * dp * dp);
        if 2 * i + 1 == m {
            nodes[i] = 0.5;
        } else {
            nodes[i] = 0.5 * (1.0 - x);
            nodes[m - 1 - i] = 0.5 * (1.0 + x);
        }
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    Ok(QuadratureRule {
        gl_nodes: nodes,
        gl_weights: weights,
        bracket_panels: DEFAULT_BRACKET_PANELS,
    })
}

/// `(P_m(x), P_m'(x))`.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=m {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if m == 0 {
        return (1.0, 0.0);
    }
    let m = m as f64;
    (p1, m * (x * p1 - p0) / (x * x - 1.0))
}

/// Fixed-order pairwise summation.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (left, right) = xs.split_at(xs.len() / 2);
    pairwise_sum(left) + pairwise_sum(right)
}

pub fn integrate_convex<F>(mut f: F, rule: &QuadratureRule) -> Result<IntegralEstimate>
where
    F: FnMut(f64) -> Result<f64>,
{
    let panels = rule.bracket_panels;
    if panels == 0 {
        return Err(Error::invalid("bracket_panels", "must be positive"));
    }
    let mut eval = |t: f64| -> Result<f64> {
        let v = f(t)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite {
                context: format!("integrand at t = {t}"),
            })
        }
    };

    let mut terms = Vec::with_capacity(rule.points().max(panels + 1));
    for (&t, &w) in rule.gl_nodes.iter().zip(&rule.gl_weights) {
        terms.push(w * eval(t)?);
    }
    let gauss = pairwise_sum(&terms);

    let h = 1.0 / panels as f64;
    terms.clear();
    for k in 0..panels {
        terms.push(eval((k as f64 + 0.5) * h)?);
    }
    let lower = pairwise_sum(&terms) * h;

    terms.clear();
    for k in 0..=panels {
        let v = eval(k as f64 * h)?;
        terms.push(if k == 0 || k == panels { 0.5 * v } else { v });
    }
    let upper = pairwise_sum(&terms) * h;

    Ok(IntegralEstimate {
        value: gauss.clamp(lower.min(upper), upper.max(lower)),
        lower,
        upper,
        n_evals: rule.points() + 2 * panels + 1,
    })
}

/// `int_0^1 w((1 - t) A + t B) dt`.
pub fn integrate_omega_path(a: &ComplexMatrix, b: &ComplexMatrix, rule: &QuadratureRule, tol: f64) -> Result<IntegralEstimate> {
    check_tol(tol)?;
    let _ = ComplexMatrix::convex_combination(a, b, 0.0)?;
    let config = RadiusConfig::coarse();
    integrate_convex(
        |t| Ok(numerical_radius_with(&ComplexMatrix::lerp(a, b, t), tol, &config)?.value),
        rule,
    )
}

/// `int_0^1 ||(1 - t) A + t B|| dt`.
pub fn integrate_norm_path(a: &ComplexMatrix, b: &ComplexMatrix, rule: &QuadratureRule, tol: f64) -> Result<IntegralEstimate> {
    check_tol(tol)?;
    let _ = ComplexMatrix::convex_combination(a, b, 0.0)?;
    integrate_convex(|t| ComplexMatrix::lerp(a, b, t).operator_norm(tol), rule)
}

/// `int_0^1 w([[O, X_t], [Y_t, O]]) dt` with `X_t = (1 - t) X0 + t X1` and
/// `Y_t = (1 - t) Y0 + t Y1`. The integrand is convex because both blocks
/// are affine in `t`.
pub fn integrate_off_diag_path(
    x0: &ComplexMatrix,
    x1: &ComplexMatrix,
    y0: &ComplexMatrix,
    y1: &ComplexMatrix,
    rule: &QuadratureRule,
    tol: f64,
) -> Result<IntegralEstimate> {
    check_tol(tol)?;
    let _ = ComplexMatrix::convex_combination(x0, x1, 0.0)?;
    let _ = ComplexMatrix::convex_combination(y0, y1, 0.0)?;
    let _ = ComplexMatrix::convex_combination(x0, y0, 0.0)?;
    let config = RadiusConfig::coarse();
    integrate_convex(
        |t| {
            let x = ComplexMatrix::lerp(x0, x1, t);
            let y = ComplexMatrix::lerp(y0, y1, t);
            omega_off_diag_with(&x, &y, tol, &config)
        },
        rule,
    )
}
