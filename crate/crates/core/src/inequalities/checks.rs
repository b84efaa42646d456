use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::report::{inputs_digest, CheckReport, ReportBuilder};
use crate::error::{Error, Result};
use crate::generators::{family_residual, Family};
use crate::linalg::{check_tol, ComplexMatrix};
use crate::quadrature::{
    gauss_legendre_rule, integrate_norm_path, integrate_off_diag_path, integrate_omega_path, IntegralEstimate,
    QuadratureRule,
};
use crate::radius::{numerical_radius_with, omega_off_diag_with, scalar_integral_modulus, RadiusConfig, RadiusResult};

/// Relative Frobenius residual above which hypothesis-gated checks reject input.
pub const FAMILY_GATE: f64 = 1e-10;

const SCREEN_POINTS: usize = 16;
const GOLDEN_STEPS: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    ScalarSeed,
    TriangleRefinement,
    RealpartRefinement,
    BlockRefinement,
    OffdiagBound,
    NormalIdentity,
    SupThetaIdentity,
    SymSkewBound,
    HermiteHadamard,
    MinLemma,
    RefinedSum,
    LowerBound,
    NilpotentEquality,
}

impl CheckKind {
    pub const ALL: [CheckKind; 13] = [
        CheckKind::ScalarSeed,
        CheckKind::TriangleRefinement,
        CheckKind::RealpartRefinement,
        CheckKind::BlockRefinement,
        CheckKind::OffdiagBound,
        CheckKind::NormalIdentity,
        CheckKind::SupThetaIdentity,
        CheckKind::SymSkewBound,
        CheckKind::HermiteHadamard,
        CheckKind::MinLemma,
        CheckKind::RefinedSum,
        CheckKind::LowerBound,
        CheckKind::NilpotentEquality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::ScalarSeed => "check_scalar_seed",
            CheckKind::TriangleRefinement => "check_triangle_refinement",
            CheckKind::RealpartRefinement => "check_realpart_refinement",
            CheckKind::BlockRefinement => "check_block_refinement",
            CheckKind::OffdiagBound => "check_offdiag_bound",
            CheckKind::NormalIdentity => "check_normal_identity",
            CheckKind::SupThetaIdentity => "check_sup_theta_identity",
            CheckKind::SymSkewBound => "check_sym_skew_bound",
            CheckKind::HermiteHadamard => "check_hermite_hadamard",
            CheckKind::MinLemma => "check_min_lemma",
            CheckKind::RefinedSum => "check_refined_sum",
            CheckKind::LowerBound => "check_lower_bound",
            CheckKind::NilpotentEquality => "check_nilpotent_equality",
        }
    }

    /// Number of matrix operands.
    pub fn arity(self) -> usize {
        match self {
            CheckKind::ScalarSeed
            | CheckKind::TriangleRefinement
            | CheckKind::BlockRefinement
            | CheckKind::HermiteHadamard
            | CheckKind::MinLemma
            | CheckKind::RefinedSum => 2,
            _ => 1,
        }
    }

    /// Whether inputs drawn from `family` at dimension `n` meet the check's
    /// hypotheses.
    pub fn admits(self, family: Family, n: usize) -> bool {
        if n < family.min_dimension() {
            return false;
        }
        match self {
            CheckKind::ScalarSeed => n == 1,
            CheckKind::NormalIdentity => matches!(
                family,
                Family::Hermitian | Family::SkewHermitian | Family::Normal | Family::Unitary | Family::Scalar
            ),
            CheckKind::NilpotentEquality => family == Family::NilpotentSquareZero,
            _ => true,
        }
    }

    /// Checks whose report is a three-term chain `lhs <= middle <= rhs`.
    pub fn is_chain(self) -> bool {
        matches!(
            self,
            CheckKind::ScalarSeed
                | CheckKind::TriangleRefinement
                | CheckKind::RealpartRefinement
                | CheckKind::BlockRefinement
                | CheckKind::HermiteHadamard
                | CheckKind::RefinedSum
        )
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        let full = if s.starts_with("check_") { s.clone() } else { format!("check_{s}") };
        CheckKind::ALL
            .into_iter()
            .find(|k| k.name() == full)
            .ok_or_else(|| Error::invalid("check", format!("unknown check `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckConfig {
    /// Absolute tolerance on link slacks.
    pub tol: f64,
    /// Gauss-Legendre points for the path integrals.
    pub quad_points: usize,
    pub bracket_panels: usize,
    /// Uniform angles over `[0, pi)` scanned by the sup-over-theta check.
    pub theta_grid: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            quad_points: 64,
            bracket_panels: 64,
            theta_grid: 8,
        }
    }
}

impl CheckConfig {
    /// Tolerance handed to the eigenvalue and radius computations.
    pub fn omega_tol(&self) -> f64 {
        self.tol / 10.0
    }
}

/// Operands of one check instance. The seed only enters the digest.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckInputs {
    pub matrices: Vec<ComplexMatrix>,
    pub seed: Option<u64>,
}

impl CheckInputs {
    pub fn one(a: ComplexMatrix) -> Self {
        Self {
            matrices: vec![a],
            seed: None,
        }
    }

    pub fn two(a: ComplexMatrix, b: ComplexMatrix) -> Self {
        Self {
            matrices: vec![a, b],
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

pub struct Checker {
    config: CheckConfig,
    rule: QuadratureRule,
    screen: QuadratureRule,
    radius: RadiusConfig,
}

impl Checker {
    pub fn new(config: CheckConfig) -> Result<Self> {
        check_tol(config.tol)?;
        if config.theta_grid < 8 {
            return Err(Error::invalid("theta_grid", format!("{} is below the minimum of 8", config.theta_grid)));
        }
        let rule = gauss_legendre_rule(config.quad_points)?.with_panels(config.bracket_panels);
        if config.bracket_panels == 0 {
            return Err(Error::invalid("bracket_panels", "must be positive"));
        }
        let screen = gauss_legendre_rule(SCREEN_POINTS)?.with_panels(SCREEN_POINTS);
        Ok(Self {
            config,
            rule,
            screen,
            radius: RadiusConfig::coarse(),
        })
    }

    pub fn config(&self) -> &CheckConfig {
        &self.config
    }

    pub fn run(&self, kind: CheckKind, inputs: &CheckInputs) -> Result<CheckReport> {
        let m = &inputs.matrices;
        if m.len() != kind.arity() {
            return Err(Error::invalid(
                "inputs",
                format!("{} takes {} matrices, got {}", kind, kind.arity(), m.len()),
            ));
        }
        if m.len() == 2 && m[0].n() != m[1].n() {
            return Err(Error::DimensionMismatch {
                expected: m[0].n(),
                found: m[1].n(),
            });
        }
        let seed = inputs.seed;
        match kind {
            CheckKind::ScalarSeed => {
                if m[0].n() != 1 {
                    return Err(Error::invalid("inputs", "check_scalar_seed takes 1x1 matrices"));
                }
                let mut r = check_scalar_seed(m[0].get(0, 0), m[1].get(0, 0));
                r.inputs_digest = inputs_digest(kind.name(), &[&m[0], &m[1]], seed);
                r.tolerance = self.config.tol;
                r.passed = r.links.iter().all(|l| l.slack >= -r.tolerance);
                Ok(r)
            }
            CheckKind::TriangleRefinement => self.triangle_refinement(&m[0], &m[1], seed),
            CheckKind::RealpartRefinement => self.realpart_refinement(&m[0], seed),
            CheckKind::BlockRefinement => self.block_refinement(&m[0], &m[1], seed),
            CheckKind::OffdiagBound => self.offdiag_bound(&m[0], seed),
            CheckKind::NormalIdentity => self.normal_identity(&m[0], seed),
            CheckKind::SupThetaIdentity => self.sup_theta_identity(&m[0], seed),
            CheckKind::SymSkewBound => self.sym_skew_bound(&m[0], seed),
            CheckKind::HermiteHadamard => self.hermite_hadamard(&m[0], &m[1], seed),
            CheckKind::MinLemma => self.min_lemma(&m[0], &m[1], seed),
            CheckKind::RefinedSum => self.refined_sum(&m[0], &m[1], seed),
            CheckKind::LowerBound => self.lower_bound(&m[0], seed),
            CheckKind::NilpotentEquality => self.nilpotent_equality(&m[0], seed),
        }
    }

    fn finish(&self, b: ReportBuilder, kind: CheckKind, matrices: &[&ComplexMatrix], seed: Option<u64>) -> CheckReport {
        b.finish(kind.name(), inputs_digest(kind.name(), matrices, seed), self.config.tol)
    }

    fn omega(&self, a: &ComplexMatrix) -> Result<RadiusResult> {
        numerical_radius_with(a, self.config.omega_tol(), &self.radius)
    }

    fn norm(&self, a: &ComplexMatrix) -> Result<f64> {
        a.operator_norm(self.config.omega_tol())
    }

    fn omega_path(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<IntegralEstimate> {
        integrate_omega_path(a, b, &self.rule, self.config.omega_tol())
    }

    fn norm_path(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<IntegralEstimate> {
        integrate_norm_path(a, b, &self.rule, self.config.omega_tol())
    }

    fn block_path(&self, x0: &ComplexMatrix, x1: &ComplexMatrix, y0: &ComplexMatrix, y1: &ComplexMatrix) -> Result<IntegralEstimate> {
        integrate_off_diag_path(x0, x1, y0, y1, &self.rule, self.config.omega_tol())
    }

    /// Records an integral's estimate and its convexity enclosure.
    fn integral_term(b: &mut ReportBuilder, label: &str, est: &IntegralEstimate) -> f64 {
        b.term(&format!("{label} [lower]"), est.lower);
        b.term(&format!("{label} [upper]"), est.upper);
        b.term(label, est.value)
    }

    fn gate(&self, a: &ComplexMatrix, family: Family, check: CheckKind) -> Result<f64> {
        let residual = family_residual(a, family);
        if residual > FAMILY_GATE {
            return Err(Error::NotInFamily {
                check: check.name(),
                family: family.name(),
                residual,
                threshold: FAMILY_GATE,
            });
        }
        Ok(residual)
    }

    /// `w(A+B) <= 2 int w((1-t)A + tB) dt <= w(A) + w(B)`.
    pub fn triangle_refinement(&self, a: &ComplexMatrix, b: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let mut r = ReportBuilder::default();
        let sum = a.checked_add(b)?;
        r.term("omega(A+B)", self.omega(&sum)?.value);
        let wa = r.term("omega(A)", self.omega(a)?.value);
        let wb = r.term("omega(B)", self.omega(b)?.value);
        let i = Self::integral_term(&mut r, "int omega((1-t)A+tB)", &self.omega_path(a, b)?);
        r.term("2*int omega((1-t)A+tB)", 2.0 * i);
        r.term("omega(A)+omega(B)", wa + wb);
        r.link("omega(A+B)", "2*int omega((1-t)A+tB)");
        r.link("2*int omega((1-t)A+tB)", "omega(A)+omega(B)");
        Ok(self.finish(r, CheckKind::TriangleRefinement, &[a, b], seed))
    }

    /// `||Re A|| <= int w((1-t)A + tA*) dt <= w(A)`.
    pub fn realpart_refinement(&self, a: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let mut r = ReportBuilder::default();
        r.term("||Re A||", a.real_part().spectral_norm()?);
        Self::integral_term(&mut r, "int omega((1-t)A+tA*)", &self.omega_path(a, &a.adjoint())?);
        r.term("omega(A)", self.omega(a)?.value);
        r.link("||Re A||", "int omega((1-t)A+tA*)");
        r.link("int omega((1-t)A+tA*)", "omega(A)");
        Ok(self.finish(r, CheckKind::RealpartRefinement, &[a], seed))
    }

    /// `||S+T|| <= 2 int w([[O, (1-t)S+tT], [tS*+(1-t)T*, O]]) dt <= 2 w([[O, S], [T*, O]])`.
    pub fn block_refinement(&self, s: &ComplexMatrix, t: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let mut r = ReportBuilder::default();
        r.term("||S+T||", self.norm(&s.checked_add(t)?)?);
        let (s_adj, t_adj) = (s.adjoint(), t.adjoint());
        // Bottom-left block (1-t)T* + tS*, straight from the formula.
        let i = Self::integral_term(&mut r, "int omega(block_t)", &self.block_path(s, t, &t_adj, &s_adj)?);
        r.term("2*int omega(block_t)", 2.0 * i);
        let w = omega_off_diag_with(s, &t_adj, self.config.omega_tol(), &self.radius)?;
        r.term("2*omega([[O,S],[T*,O]])", 2.0 * w);
        r.link("||S+T||", "2*int omega(block_t)");
        r.link("2*int omega(block_t)", "2*omega([[O,S],[T*,O]])");
        Ok(self.finish(r, CheckKind::BlockRefinement, &[s, t], seed))
    }

    /// `w(A) <= 2 int w([[O, (1-t)A], [tA, O]]) dt`.
    pub fn offdiag_bound(&self, a: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let mut r = ReportBuilder::default();
        r.term("omega(A)", self.omega(a)?.value);
        let zero = ComplexMatrix::zeros(a.n());
        let i = Self::integral_term(&mut r, "int omega([[O,(1-t)A],[tA,O]])", &self.block_path(a, &zero, &zero, a)?);
        r.term("2*int omega([[O,(1-t)A],[tA,O]])", 2.0 * i);
        r.link("omega(A)", "2*int omega([[O,(1-t)A],[tA,O]])");
        Ok(self.finish(r, CheckKind::OffdiagBound, &[a], seed))
    }

    /// `2 int w([[O, (1-t)A], [tA, O]]) dt = ||A||` for normal `A`.
    pub fn normal_identity(&self, a: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let residual = self.gate(a, Family::Normal, CheckKind::NormalIdentity)?;
        let mut r = ReportBuilder::default();
        r.term("normal residual", residual);
        let zero = ComplexMatrix::zeros(a.n());
        let i = Self::integral_term(&mut r, "int omega([[O,(1-t)A],[tA,O]])", &self.block_path(a, &zero, &zero, a)?);
        r.term("2*int omega([[O,(1-t)A],[tA,O]])", 2.0 * i);
        r.term("||A||", self.norm(a)?);
        r.link("2*int omega([[O,(1-t)A],[tA,O]])", "||A||");
        r.link("||A||", "2*int omega([[O,(1-t)A],[tA,O]])");
        Ok(self.finish(r, CheckKind::NormalIdentity, &[a], seed))
    }

    /// `w(A) = sup_theta int w((1-t) e^{i theta} A + t e^{-i theta} A*) dt`.
    ///
    /// The integral `J(theta)` has period `pi` and is `||A||`-Lipschitz, so a
    /// uniform grid of `K` angles misses the supremum by at most
    /// `||A|| pi / (2K)`. Besides the grid (scanned with a 16-point screening
    /// rule) the maximizing rotation of `w(A)` is evaluated with the full
    /// rule: there `Re(e^{i theta} A)` is a common real part of the whole path.
    /// If neither reaches `w(A) - tol`, golden-section search refines around
    /// the best grid angle.
    pub fn sup_theta_identity(&self, a: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let k = self.config.theta_grid;
        let omega = self.omega(a)?;
        let norm = self.norm(a)?;
        let adj = a.adjoint();
        let tol = self.config.omega_tol();
        let path = |theta: f64, rule: &QuadratureRule| -> Result<f64> {
            let phase = Complex64::from_polar(1.0, theta);
            Ok(integrate_omega_path(&a.scale(phase), &adj.scale(phase.conj()), rule, tol)?.value)
        };

        let step = PI / k as f64;
        let mut best = (f64::NEG_INFINITY, 0.0);
        for j in 0..k {
            let theta = j as f64 * step;
            let v = path(theta, &self.screen)?;
            if v > best.0 {
                best = (v, theta);
            }
        }
        let grid_best = best;
        let star = omega.argmax_theta % PI;
        let v_star = path(star, &self.rule)?;
        if v_star > best.0 {
            best = (v_star, star);
        }

        if best.0 < omega.value - self.config.tol {
            let (mut lo, mut hi) = (grid_best.1 - step, grid_best.1 + step);
            const INV_PHI: f64 = 0.618_033_988_749_894_9;
            let mut x1 = hi - INV_PHI * (hi - lo);
            let mut x2 = lo + INV_PHI * (hi - lo);
            let mut f1 = path(x1, &self.rule)?;
            let mut f2 = path(x2, &self.rule)?;
            for _ in 0..GOLDEN_STEPS {
                if f1 >= f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - INV_PHI * (hi - lo);
                    f1 = path(x1, &self.rule)?;
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + INV_PHI * (hi - lo);
                    f2 = path(x2, &self.rule)?;
                }
            }
            for (v, x) in [(f1, x1), (f2, x2)] {
                if v > best.0 {
                    best = (v, x.rem_euclid(PI));
                }
            }
        }

        let bound = norm * PI / (2.0 * k as f64);
        let mut r = ReportBuilder::default();
        let m = r.term("sup_theta int omega(path_theta)", best.0);
        r.term("argmax theta", best.1);
        r.term("grid bound", bound);
        r.term("sup_theta int omega(path_theta) + grid bound", m + bound);
        r.term("omega(A)", omega.value);
        r.link("sup_theta int omega(path_theta)", "omega(A)");
        r.link("omega(A)", "sup_theta int omega(path_theta) + grid bound");
        if family_residual(a, Family::Normal) <= FAMILY_GATE {
            r.term("||A||", norm);
            r.link("sup_theta int omega(path_theta)", "||A||");
            r.link("||A||", "sup_theta int omega(path_theta) + grid bound");
        }
        Ok(self.finish(r, CheckKind::SupThetaIdentity, &[a], seed))
    }

    /// `||Re A|| <= I+ <= w(A)` and `||Im A|| <= I- <= w(A)` with
    /// `I+- = int w((1-t)A +- tA*) dt`.
    pub fn sym_skew_bound(&self, a: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let mut r = ReportBuilder::default();
        let adj = a.adjoint();
        r.term("||Re A||", a.real_part().spectral_norm()?);
        r.term("||Im A||", a.imag_part().spectral_norm()?);
        Self::integral_term(&mut r, "int omega((1-t)A+tA*)", &self.omega_path(a, &adj)?);
        Self::integral_term(&mut r, "int omega((1-t)A-tA*)", &self.omega_path(a, &(-&adj))?);
        r.term("omega(A)", self.omega(a)?.value);
        r.link("||Re A||", "int omega((1-t)A+tA*)");
        r.link("||Im A||", "int omega((1-t)A-tA*)");
        r.link("int omega((1-t)A+tA*)", "omega(A)");
        r.link("int omega((1-t)A-tA*)", "omega(A)");
        Ok(self.finish(r, CheckKind::SymSkewBound, &[a], seed))
    }

    /// `||A+B|| <= 2 int ||(1-t)A + tB|| dt <= ||A|| + ||B||`.
    pub fn hermite_hadamard(&self, a: &ComplexMatrix, b: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let mut r = ReportBuilder::default();
        r.term("||A+B||", self.norm(&a.checked_add(b)?)?);
        let i = Self::integral_term(&mut r, "int ||(1-t)A+tB||", &self.norm_path(a, b)?);
        r.term("2*int ||(1-t)A+tB||", 2.0 * i);
        let na = r.term("||A||", self.norm(a)?);
        let nb = r.term("||B||", self.norm(b)?);
        r.term("||A||+||B||", na + nb);
        r.link("||A+B||", "2*int ||(1-t)A+tB||");
        r.link("2*int ||(1-t)A+tB||", "||A||+||B||");
        Ok(self.finish(r, CheckKind::HermiteHadamard, &[a, b], seed))
    }

    /// `int w(block_t) dt` and `int ||(1-t)S + tT|| dt` shared by the
    /// two-operand block checks.
    fn block_and_norm_integrals(&self, r: &mut ReportBuilder, s: &ComplexMatrix, t: &ComplexMatrix) -> Result<(f64, f64)> {
        let (s_adj, t_adj) = (s.adjoint(), t.adjoint());
        let iw = Self::integral_term(r, "int omega(block_t)", &self.block_path(s, t, &t_adj, &s_adj)?);
        let inorm = Self::integral_term(r, "int ||(1-t)S+tT||", &self.norm_path(s, t)?);
        Ok((iw, inorm))
    }

    /// `||S+T|| <= 2 min(int w(block_t) dt, int ||(1-t)S + tT|| dt)`.
    pub fn min_lemma(&self, s: &ComplexMatrix, t: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let mut r = ReportBuilder::default();
        r.term("||S+T||", self.norm(&s.checked_add(t)?)?);
        let (iw, inorm) = self.block_and_norm_integrals(&mut r, s, t)?;
        r.term("2*min(int omega(block_t), int ||(1-t)S+tT||)", 2.0 * iw.min(inorm));
        r.link("||S+T||", "2*min(int omega(block_t), int ||(1-t)S+tT||)");
        Ok(self.finish(r, CheckKind::MinLemma, &[s, t], seed))
    }

    /// `||S+T|| + |I_w - I_N| <= I_w + I_N <= ||S|| + ||T||`.
    pub fn refined_sum(&self, s: &ComplexMatrix, t: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let mut r = ReportBuilder::default();
        let n_sum = r.term("||S+T||", self.norm(&s.checked_add(t)?)?);
        let (iw, inorm) = self.block_and_norm_integrals(&mut r, s, t)?;
        r.term("||S+T|| + |I_omega - I_norm|", n_sum + (iw - inorm).abs());
        r.term("I_omega + I_norm", iw + inorm);
        let ns = r.term("||S||", self.norm(s)?);
        let nt = r.term("||T||", self.norm(t)?);
        r.term("||S||+||T||", ns + nt);
        r.link("||S+T|| + |I_omega - I_norm|", "I_omega + I_norm");
        r.link("I_omega + I_norm", "||S||+||T||");
        Ok(self.finish(r, CheckKind::RefinedSum, &[s, t], seed))
    }

    /// `I_w = int w([[O, X_t], [Y_t, O]]) dt` and `I_N = int ||X_t|| dt` with
    /// `X_t = (1-t) Re A + i t Im A` and `Y_t = t Re A - i (1-t) Im A`, i.e. the
    /// refined-sum blocks for `S = Re A`, `T = i Im A`. With `+i` in `Y_t`
    /// both statements fail already for the 2x2 Jordan block.
    fn cartesian_integrals(&self, r: &mut ReportBuilder, a: &ComplexMatrix) -> Result<(f64, f64)> {
        let re = a.real_part().into_matrix();
        let i_im = a.imag_part().into_matrix().scale(Complex64::new(0.0, 1.0));
        let i_im_adj = i_im.adjoint();
        let iw = Self::integral_term(r, "int omega([[O,X_t],[Y_t,O]])", &self.block_path(&re, &i_im, &i_im_adj, &re)?);
        let inorm = Self::integral_term(r, "int ||X_t||", &self.norm_path(&re, &i_im)?);
        Ok((iw, inorm))
    }

    /// `||A||/2 + |I_w - I_N| / 2 <= w(A)`, alongside `||A||/2 <= w(A)`.
    pub fn lower_bound(&self, a: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let mut r = ReportBuilder::default();
        let half_norm = r.term("||A||/2", 0.5 * self.norm(a)?);
        let (iw, inorm) = self.cartesian_integrals(&mut r, a)?;
        r.term("||A||/2 + |I_omega - I_norm|/2", half_norm + 0.5 * (iw - inorm).abs());
        r.term("omega(A)", self.omega(a)?.value);
        r.link("||A||/2 + |I_omega - I_norm|/2", "omega(A)");
        r.link("||A||/2", "omega(A)");
        Ok(self.finish(r, CheckKind::LowerBound, &[a], seed))
    }

    /// `I_w = I_N` when `A^2 = O`.
    pub fn nilpotent_equality(&self, a: &ComplexMatrix, seed: Option<u64>) -> Result<CheckReport> {
        let residual = self.gate(a, Family::NilpotentSquareZero, CheckKind::NilpotentEquality)?;
        let mut r = ReportBuilder::default();
        r.term("square-zero residual", residual);
        self.cartesian_integrals(&mut r, a)?;
        let w = self.omega(a)?.value;
        r.term("omega(A) - ||A||/2", w - 0.5 * self.norm(a)?);
        r.link("int omega([[O,X_t],[Y_t,O]])", "int ||X_t||");
        r.link("int ||X_t||", "int omega([[O,X_t],[Y_t,O]])");
        Ok(self.finish(r, CheckKind::NilpotentEquality, &[a], seed))
    }
}

/// `|a+b| <= 2 int |(1-t)a + tb| dt <= |a| + |b|` for complex scalars.
pub fn check_scalar_seed(a: Complex64, b: Complex64) -> CheckReport {
    let mut r = ReportBuilder::default();
    r.term("|a+b|", (a + b).norm());
    r.term("2*int |(1-t)a+tb|", 2.0 * scalar_integral_modulus(a, b));
    r.term("|a|+|b|", a.norm() + b.norm());
    r.link("|a+b|", "2*int |(1-t)a+tb|");
    r.link("2*int |(1-t)a+tb|", "|a|+|b|");
    let (ma, mb) = (ComplexMatrix::scalar(a), ComplexMatrix::scalar(b));
    let name = CheckKind::ScalarSeed.name();
    r.finish(name, inputs_digest(name, &[&ma, &mb], None), 1e-12)
}
