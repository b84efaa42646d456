use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::linalg::ComplexMatrix;

/// One inequality `lhs <= rhs` of a chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub lhs_label: String,
    pub rhs_label: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub inputs_digest: String,
    pub tolerance: f64,
    pub passed: bool,
    pub links: Vec<ChainLink>,
    pub terms: BTreeMap<String, f64>,
}

impl CheckReport {
    /// Passed, but some link only within the tolerance.
    pub fn marginal(&self) -> bool {
        self.passed && self.links.iter().any(|l| l.slack < 0.0)
    }

    pub fn worst_link(&self) -> Option<&ChainLink> {
        self.links.iter().min_by(|a, b| a.slack.total_cmp(&b.slack))
    }

    pub fn worst_slack(&self) -> f64 {
        self.worst_link().map_or(f64::INFINITY, |l| l.slack)
    }

    /// Links that fail the tolerance.
    pub fn violations(&self) -> impl Iterator<Item = &ChainLink> {
        self.links.iter().filter(move |l| l.slack < -self.tolerance)
    }
}

/// Collects terms first and builds links by label, so every link that
/// mentions a term reads the single stored value.
#[derive(Default)]
pub(crate) struct ReportBuilder {
    terms: BTreeMap<String, f64>,
    links: Vec<(String, String)>,
}

impl ReportBuilder {
    pub(crate) fn term(&mut self, label: &str, value: f64) -> f64 {
        self.terms.insert(label.to_string(), value);
        value
    }

    pub(crate) fn link(&mut self, lhs: &str, rhs: &str) {
        debug_assert!(self.terms.contains_key(lhs) && self.terms.contains_key(rhs));
        self.links.push((lhs.to_string(), rhs.to_string()));
    }

    pub(crate) fn finish(self, check_name: &str, inputs_digest: String, tolerance: f64) -> CheckReport {
        let links: Vec<ChainLink> = self
            .links
            .into_iter()
            .map(|(l, r)| {
                let lhs = self.terms[&l];
                let rhs = self.terms[&r];
                ChainLink {
                    lhs_label: l,
                    rhs_label: r,
                    lhs,
                    rhs,
                    slack: rhs - lhs,
                }
            })
            .collect();
        let passed = links.iter().all(|l| l.slack >= -tolerance);
        CheckReport {
            check_name: check_name.to_string(),
            inputs_digest,
            tolerance,
            passed,
            links,
            terms: self.terms,
        }
    }
}

/// SHA-256 over the check name, each matrix (dimension then row-major
/// `re, im` pairs, all little-endian) and the optional seed; the first 16
/// bytes in lowercase hex.
pub fn inputs_digest(check_name: &str, matrices: &[&ComplexMatrix], seed: Option<u64>) -> String {
    let mut h = Sha256::new();
    h.update((check_name.len() as u64).to_le_bytes());
    h.update(check_name.as_bytes());
    for m in matrices {
        h.update((m.n() as u64).to_le_bytes());
        for z in m.data() {
            h.update(z.re.to_le_bytes());
            h.update(z.im.to_le_bytes());
        }
    }
    match seed {
        Some(s) => {
            h.update([1u8]);
            h.update(s.to_le_bytes());
        }
        None => h.update([0u8]),
    }
    h.finalize()[..16].iter().map(|b| format!("{b:02x}")).collect()
}
