//! Verification campaigns: instance enumeration, seeding, summaries and the
//! verify / gap / search drivers.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use numrad::{
    generate, CheckConfig, CheckInputs, CheckKind, CheckReport, Checker, Complex64, ComplexMatrix, Family, FamilySpec,
    NilpotentForm,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutFormat {
    Json,
    Csv,
}

impl FromStr for OutFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(OutFormat::Json),
            "csv" => Ok(OutFormat::Csv),
            other => Err(CliError::Usage(format!("unknown format `{other}` (expected json or csv)"))),
        }
    }
}

/// A family plus the construction options that are not per-instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilyTemplate {
    pub family: Family,
    pub nilpotent_form: NilpotentForm,
}

impl FamilyTemplate {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            nilpotent_form: NilpotentForm::default(),
        }
    }

    /// Name used in seeds, CSV rows and digests; `nilpotent_block` for the
    /// block construction.
    pub fn name(&self) -> &'static str {
        match (self.family, self.nilpotent_form) {
            (Family::NilpotentSquareZero, NilpotentForm::Block) => "nilpotent_block",
            (f, _) => f.name(),
        }
    }

    fn spec(&self, n: usize, seed: u64, scale: f64) -> FamilySpec {
        FamilySpec::new(self.family, n, seed)
            .with_scale(scale)
            .with_nilpotent_form(self.nilpotent_form)
    }
}

impl fmt::Display for FamilyTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTemplate {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        if key == "nilpotent_block" {
            return Ok(Self {
                family: Family::NilpotentSquareZero,
                nilpotent_form: NilpotentForm::Block,
            });
        }
        Ok(Self::new(key.parse()?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub checks: Vec<CheckKind>,
    pub families: Vec<FamilyTemplate>,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub quad_points: usize,
    pub theta_grid: usize,
    /// Report destination; standard output when absent. For `search`,
    /// failure dumps go next to it.
    pub out_path: Option<PathBuf>,
    pub out_format: OutFormat,
    /// Target operator-norm scale handed to the generators.
    pub scale: f64,
    /// Jointly rescale each instance's operands so that their largest
    /// operator norm is 1.
    pub normalize: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        let check = CheckConfig::default();
        Self {
            checks: CheckKind::ALL.to_vec(),
            families: [
                Family::General,
                Family::Hermitian,
                Family::Normal,
                Family::Unitary,
                Family::NilpotentSquareZero,
                Family::Scalar,
            ]
            .into_iter()
            .map(FamilyTemplate::new)
            .collect(),
            sizes: vec![1, 2, 4],
            trials: 10,
            seed: 0,
            tol: check.tol,
            quad_points: check.quad_points,
            theta_grid: check.theta_grid,
            out_path: None,
            out_format: OutFormat::Json,
            scale: 1.0,
            normalize: true,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let usage = |m: &str| Err(CliError::Usage(m.to_string()));
        if self.checks.is_empty() {
            return usage("at least one check is required (--checks)");
        }
        if self.families.is_empty() {
            return usage("at least one family is required (--families)");
        }
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return usage("sizes must be a non-empty list of positive integers (--sizes)");
        }
        if self.trials == 0 {
            return usage("trials must be at least 1");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return usage("tol must be a positive finite number");
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return usage("scale must be a positive finite number");
        }
        self.checker().map(|_| ())
    }

    pub fn check_config(&self) -> CheckConfig {
        CheckConfig {
            tol: self.tol,
            quad_points: self.quad_points,
            theta_grid: self.theta_grid,
            ..CheckConfig::default()
        }
    }

    fn checker(&self) -> Result<Checker, CliError> {
        Checker::new(self.check_config()).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Every (check, family, size, trial) combination whose family and size
    /// the check admits, in configuration order.
    pub fn instances(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        for &check in &self.checks {
            for &family in &self.families {
                for &n in &self.sizes {
                    if !check.admits(family.family, n) {
                        continue;
                    }
                    for trial in 0..self.trials {
                        out.push(Instance {
                            check,
                            family,
                            n,
                            trial,
                            seed: instance_seed(self.seed, check, family.name(), n, trial),
                        });
                    }
                }
            }
        }
        out
    }
}

/// First eight bytes (little-endian) of
/// `SHA-256("{campaign_seed}|{check}|{family}|{n}|{trial}")`.
pub fn instance_seed(campaign_seed: u64, check: CheckKind, family: &str, n: usize, trial: usize) -> u64 {
    let key = format!("{campaign_seed}|{}|{family}|{n}|{trial}", check.name());
    let digest = Sha256::digest(key.as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Instance {
    pub check: CheckKind,
    pub family: FamilyTemplate,
    pub n: usize,
    pub trial: usize,
    pub seed: u64,
}

impl Instance {
    /// Operands drawn from the instance seed; the second operand uses the
    /// seed's successor.
    pub fn operands(&self, scale: f64) -> Result<Vec<ComplexMatrix>, CliError> {
        (0..self.check.arity() as u64)
            .map(|k| Ok(generate(&self.family.spec(self.n, self.seed.wrapping_add(k), scale))?))
            .collect()
    }
}

/// Rescales operands jointly so that the largest operator norm is 1. The
/// all-zero tuple is returned unchanged.
pub fn normalize_jointly(ms: &mut [ComplexMatrix], tol: f64) -> Result<(), CliError> {
    let mut peak = 0.0f64;
    for m in ms.iter() {
        peak = peak.max(m.operator_norm(tol)?);
    }
    if peak > 0.0 {
        for m in ms.iter_mut() {
            *m = m.scale_real(1.0 / peak);
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WorstSlack {
    pub slack: f64,
    pub inputs_digest: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapStats {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignSummary {
    pub total: usize,
    pub passed: usize,
    pub marginal: usize,
    pub failed: usize,
    pub worst_slack_by_check: BTreeMap<String, WorstSlack>,
    /// Statistics of each check's first-link slack.
    pub gap_stats_by_check: BTreeMap<String, GapStats>,
}

impl CampaignSummary {
    pub fn from_reports(reports: &[CheckReport]) -> Self {
        let mut worst: BTreeMap<String, WorstSlack> = BTreeMap::new();
        let mut gaps: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for r in reports {
            let s = r.worst_slack();
            let entry = worst.entry(r.check_name.clone()).or_insert_with(|| WorstSlack {
                slack: f64::INFINITY,
                inputs_digest: String::new(),
            });
            // Reports arrive sorted by digest, so ties keep the smallest digest.
            if s < entry.slack {
                *entry = WorstSlack {
                    slack: s,
                    inputs_digest: r.inputs_digest.clone(),
                };
            }
            if let Some(first) = r.links.first() {
                gaps.entry(r.check_name.clone()).or_default().push(first.slack);
            }
        }
        let gap_stats_by_check = gaps
            .into_iter()
            .map(|(k, v)| {
                let min = v.iter().copied().fold(f64::INFINITY, f64::min);
                let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let mean = v.iter().sum::<f64>() / v.len() as f64;
                (k, GapStats { min, mean, max })
            })
            .collect();
        let passed = reports.iter().filter(|r| r.passed).count();
        Self {
            total: reports.len(),
            passed,
            marginal: reports.iter().filter(|r| r.marginal()).count(),
            failed: reports.len() - passed,
            worst_slack_by_check: worst,
            gap_stats_by_check,
        }
    }
}

/// One evaluated instance: its report and the operands it ran on.
pub struct Outcome {
    pub instance: Instance,
    pub operands: Vec<ComplexMatrix>,
    pub report: CheckReport,
}

fn evaluate(checker: &Checker, instance: Instance, mut operands: Vec<ComplexMatrix>, config: &CampaignConfig) -> Result<Outcome, CliError> {
    if config.normalize {
        normalize_jointly(&mut operands, config.check_config().omega_tol())?;
    }
    let inputs = CheckInputs {
        matrices: operands.clone(),
        seed: Some(instance.seed),
    };
    let report = checker.run(instance.check, &inputs)?;
    Ok(Outcome {
        instance,
        operands,
        report,
    })
}

fn sort_by_digest(outcomes: &mut [Outcome]) {
    outcomes.sort_by(|a, b| {
        a.report
            .inputs_digest
            .cmp(&b.report.inputs_digest)
            .then_with(|| a.report.check_name.cmp(&b.report.check_name))
    });
}

/// Runs every instance of the campaign; outcomes are sorted by digest.
pub fn verify(config: &CampaignConfig) -> Result<Vec<Outcome>, CliError> {
    config.validate()?;
    let checker = config.checker()?;
    let mut outcomes = config
        .instances()
        .into_iter()
        .map(|inst| evaluate(&checker, inst, inst.operands(config.scale)?, config))
        .collect::<Result<Vec<_>, _>>()?;
    sort_by_digest(&mut outcomes);
    Ok(outcomes)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapRow {
    pub check: String,
    pub n: usize,
    pub family: String,
    pub seed: u64,
    pub lhs: f64,
    pub middle: f64,
    pub rhs: f64,
    /// `rhs - middle`: how much the middle term improves on the classical bound.
    pub improvement: f64,
    /// `middle - lhs`.
    pub residual: f64,
}

impl GapRow {
    pub fn from_outcome(o: &Outcome) -> Option<Self> {
        Self::from_report(&o.report, o.instance.n, o.instance.family.name(), o.instance.seed)
    }

    /// Reads `lhs <= middle <= rhs` off a two-link chain report.
    pub fn from_report(report: &CheckReport, n: usize, family: &str, seed: u64) -> Option<Self> {
        let [first, second] = report.links.as_slice() else {
            return None;
        };
        Some(Self {
            check: report.check_name.clone(),
            n,
            family: family.to_string(),
            seed,
            lhs: first.lhs,
            middle: first.rhs,
            rhs: second.rhs,
            improvement: second.slack,
            residual: first.slack,
        })
    }

    pub fn within(&self, tol: f64) -> bool {
        self.improvement >= -tol && self.residual >= -tol
    }
}

/// Chain checks only; one row per instance in digest order.
pub fn gap(config: &CampaignConfig) -> Result<(Vec<Outcome>, Vec<GapRow>), CliError> {
    if let Some(k) = config.checks.iter().find(|k| !k.is_chain()) {
        return Err(CliError::Usage(format!("{k} is not a chain check and has no gap")));
    }
    let outcomes = verify(config)?;
    let rows = outcomes.iter().filter_map(GapRow::from_outcome).collect();
    Ok((outcomes, rows))
}

/// Input variant used by the stress search, chosen round-robin by trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StressVariant {
    Plain,
    /// Operands multiplied by `10^k`, `k` in `[-8, 8]`, before any normalization.
    ExtremeScale,
    /// Second operand within `1e-9` of the first (or a `1e-9` perturbation
    /// of the single operand that stays in its family).
    NearEqual,
    /// Second operand within `1e-9` of the negated first; single operands
    /// are shrunk by `1e-9`.
    NearCancel,
}

impl StressVariant {
    pub const ALL: [StressVariant; 4] = [
        StressVariant::Plain,
        StressVariant::ExtremeScale,
        StressVariant::NearEqual,
        StressVariant::NearCancel,
    ];

    pub fn for_trial(trial: usize) -> Self {
        Self::ALL[trial % Self::ALL.len()]
    }
}

fn stress_operands(inst: &Instance, scale: f64) -> Result<Vec<ComplexMatrix>, CliError> {
    let mut ms = inst.operands(scale)?;
    let eps = 1e-9;
    match StressVariant::for_trial(inst.trial) {
        StressVariant::Plain => {}
        StressVariant::ExtremeScale => {
            let k = (inst.seed % 17) as i32 - 8;
            for m in &mut ms {
                *m = m.scale_real(10f64.powi(k));
            }
        }
        StressVariant::NearEqual | StressVariant::NearCancel if ms.len() == 2 => {
            let sign = if StressVariant::for_trial(inst.trial) == StressVariant::NearEqual { 1.0 } else { -1.0 };
            let a = &ms[0];
            let wiggle = ms[1].scale_real(eps);
            ms[1] = &a.scale_real(sign) + &wiggle;
        }
        StressVariant::NearEqual => {
            // Family-preserving perturbation: a tiny multiple of an independent draw.
            let extra = generate(&inst.family.spec(inst.n, inst.seed ^ 0x9e37_79b9_7f4a_7c15, scale))?;
            let mixed = &ms[0] + &extra.scale(Complex64::new(eps, 0.0));
            if numrad::family_residual(&mixed, inst.family.family) <= numrad::inequalities::FAMILY_GATE {
                ms[0] = mixed;
            }
        }
        StressVariant::NearCancel => {
            ms[0] = ms[0].scale_real(eps);
        }
    }
    Ok(ms)
}

/// File name stem of a failure dump for operand `k` (`A`, `B`, ...).
pub fn dump_name(digest: &str, k: usize) -> String {
    format!("{digest}_{}.json", (b'A' + k as u8) as char)
}

/// Stress campaign: like [`verify`] but with extreme scales and
/// near-degenerate operands.
pub fn search(config: &CampaignConfig) -> Result<Vec<Outcome>, CliError> {
    config.validate()?;
    let checker = config.checker()?;
    let mut outcomes = config
        .instances()
        .into_iter()
        .map(|inst| evaluate(&checker, inst, stress_operands(&inst, config.scale)?, config))
        .collect::<Result<Vec<_>, _>>()?;
    sort_by_digest(&mut outcomes);
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(check: CheckKind, family: Family, sizes: &[usize], trials: usize) -> CampaignConfig {
        CampaignConfig {
            checks: vec![check],
            families: vec![FamilyTemplate::new(family)],
            sizes: sizes.to_vec(),
            trials,
            seed: 42,
            ..CampaignConfig::default()
        }
    }

    #[test]
    fn instance_seeds_are_stable_and_distinct() {
        let s = instance_seed(42, CheckKind::TriangleRefinement, "general", 2, 0);
        assert_eq!(s, instance_seed(42, CheckKind::TriangleRefinement, "general", 2, 0));
        assert_ne!(s, instance_seed(43, CheckKind::TriangleRefinement, "general", 2, 0));
        assert_ne!(s, instance_seed(42, CheckKind::TriangleRefinement, "general", 2, 1));
        assert_ne!(s, instance_seed(42, CheckKind::MinLemma, "general", 2, 0));
        assert_ne!(s, instance_seed(42, CheckKind::TriangleRefinement, "general", 3, 0));
    }

    #[test]
    fn instances_respect_admissibility() {
        let cfg = CampaignConfig {
            checks: vec![CheckKind::ScalarSeed, CheckKind::NilpotentEquality],
            families: vec![FamilyTemplate::new(Family::General), FamilyTemplate::new(Family::NilpotentSquareZero)],
            sizes: vec![1, 2],
            trials: 3,
            ..CampaignConfig::default()
        };
        let inst = cfg.instances();
        // scalar seed: both families at n = 1 except nilpotent; nilpotent equality: nilpotent at n = 2.
        assert_eq!(inst.len(), 3 + 3);
        assert!(inst.iter().all(|i| i.check.admits(i.family.family, i.n)));
    }

    #[test]
    fn triangle_campaign_passes() {
        let out = verify(&small(CheckKind::TriangleRefinement, Family::General, &[2], 10)).unwrap();
        let reports: Vec<_> = out.iter().map(|o| o.report.clone()).collect();
        let s = CampaignSummary::from_reports(&reports);
        assert_eq!((s.total, s.failed), (10, 0));
        assert!(reports.windows(2).all(|w| w[0].inputs_digest <= w[1].inputs_digest));
    }

    #[test]
    fn nilpotent_campaign_is_tight() {
        let out = verify(&small(CheckKind::NilpotentEquality, Family::NilpotentSquareZero, &[4], 10)).unwrap();
        for o in &out {
            assert!(o.report.passed);
            for l in o.report.links.iter().filter(|l| l.lhs_label.starts_with("int")) {
                assert!(l.slack.abs() <= 1e-6, "{l:?}");
            }
        }
    }

    #[test]
    fn summary_tallies() {
        let out = verify(&small(CheckKind::HermiteHadamard, Family::Hermitian, &[1, 3], 2)).unwrap();
        let mut reports: Vec<_> = out.iter().map(|o| o.report.clone()).collect();
        reports[0].passed = false;
        reports[1].links[0].slack = -1e-9;
        let s = CampaignSummary::from_reports(&reports);
        assert_eq!((s.total, s.passed, s.failed, s.marginal), (4, 3, 1, 1));
        assert_eq!(s.worst_slack_by_check["check_hermite_hadamard"].inputs_digest, reports[1].inputs_digest);
    }

    #[test]
    fn hermitian_self_pairs_have_no_gap() {
        // B = A collapses every link of the triangle chain.
        let cfg = small(CheckKind::TriangleRefinement, Family::Hermitian, &[3], 2);
        let checker = cfg.checker().unwrap();
        for inst in cfg.instances() {
            let a = inst.operands(1.0).unwrap().remove(0);
            let o = evaluate(&checker, inst, vec![a.clone(), a], &cfg).unwrap();
            let row = GapRow::from_outcome(&o).unwrap();
            assert!(row.improvement.abs() <= 1e-9 && row.residual.abs() <= 1e-9, "{row:?}");
        }
    }

    #[test]
    fn gap_rejects_non_chain_checks() {
        let cfg = small(CheckKind::LowerBound, Family::General, &[2], 1);
        assert!(matches!(gap(&cfg), Err(CliError::Usage(_))));
    }

    #[test]
    fn validation() {
        let mut cfg = CampaignConfig::default();
        cfg.checks.clear();
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
        let cfg = CampaignConfig {
            theta_grid: 2,
            ..CampaignConfig::default()
        };
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
        assert_eq!("nilpotent_block".parse::<FamilyTemplate>().unwrap().name(), "nilpotent_block");
        assert!("bogus".parse::<FamilyTemplate>().is_err());
    }

    #[test]
    fn stress_variants_stay_in_family() {
        let cfg = CampaignConfig {
            checks: vec![CheckKind::NormalIdentity],
            families: vec![FamilyTemplate::new(Family::Normal)],
            sizes: vec![3],
            trials: 8,
            ..CampaignConfig::default()
        };
        let out = search(&cfg).unwrap();
        assert!(out.iter().all(|o| o.report.passed));
    }
}
