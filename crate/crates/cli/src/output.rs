//! Report documents (JSON with 17-significant-digit floats, CSV) and
//! failure dumps.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use numrad::io::{format_f64, matrix_to_value, to_json_string};
use serde::Serialize;
use serde_json::{json, Value};

use crate::campaign::{dump_name, CampaignConfig, CampaignSummary, GapRow, Outcome};
use crate::error::CliError;

fn to_value<T: Serialize>(x: &T) -> Result<Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Io(format!("serialization failed: {e}")))
}

/// `{"config", "summary", "reports"}`; the output path is left out so that
/// identical campaigns written to different files stay byte-identical.
pub fn campaign_json(config: &CampaignConfig, summary: &CampaignSummary, outcomes: &[Outcome]) -> Result<String, CliError> {
    let mut cfg = to_value(config)?;
    if let Some(obj) = cfg.as_object_mut() {
        obj.remove("out_path");
    }
    let reports: Vec<Value> = outcomes.iter().map(|o| to_value(&o.report)).collect::<Result<_, _>>()?;
    let doc = json!({
        "config": cfg,
        "summary": to_value(summary)?,
        "reports": reports,
    });
    Ok(to_json_string(&doc))
}

/// One row per link of every report.
pub fn campaign_csv(outcomes: &[Outcome]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(["check_name", "inputs_digest", "passed", "lhs_label", "rhs_label", "lhs", "rhs", "slack"])?;
    for o in outcomes {
        let r = &o.report;
        for l in &r.links {
            w.write_record([
                r.check_name.as_str(),
                r.inputs_digest.as_str(),
                if r.passed { "true" } else { "false" },
                l.lhs_label.as_str(),
                l.rhs_label.as_str(),
                &format_f64(l.lhs),
                &format_f64(l.rhs),
                &format_f64(l.slack),
            ])?;
        }
    }
    finish_csv(w)
}

pub const GAP_COLUMNS: [&str; 9] = ["check", "n", "family", "seed", "lhs", "middle", "rhs", "improvement", "residual"];

pub fn gap_csv(rows: &[GapRow]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(GAP_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.check.clone(),
            r.n.to_string(),
            r.family.clone(),
            r.seed.to_string(),
            format_f64(r.lhs),
            format_f64(r.middle),
            format_f64(r.rhs),
            format_f64(r.improvement),
            format_f64(r.residual),
        ])?;
    }
    finish_csv(w)
}

pub fn gap_json(summary: &CampaignSummary, rows: &[GapRow]) -> Result<String, CliError> {
    Ok(to_json_string(&json!({
        "summary": to_value(summary)?,
        "rows": to_value(&rows)?,
    })))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Writes `text` to `path`, or to `stdout` when no path is given.
pub fn emit(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(CliError::from),
    }
}

/// Dumps every operand of a failed instance as `<digest>_A.json`, ... with
/// a `meta` object `{check, seed, tol}`. Returns the written paths.
pub fn dump_failure(dir: &Path, o: &Outcome, tol: f64) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let meta = json!({
        "check": o.report.check_name,
        "seed": o.instance.seed,
        "tol": tol,
    });
    o.operands
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let path = dir.join(dump_name(&o.report.inputs_digest, k));
            let text = to_json_string(&matrix_to_value(m, Some(meta.clone())));
            fs::write(&path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Ok(path)
        })
        .collect()
}
