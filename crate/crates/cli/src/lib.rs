//! Command-line front end for `numrad`.
//!
//! Exit codes: 0 all passed, 1 a genuine violation was recorded, 2 usage or
//! parse error, 3 numeric failure, 4 I/O failure.

pub mod campaign;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use numrad::io::{matrix_from_json, to_json_string};
use numrad::{numerical_radius, CheckKind};
use serde_json::json;

use campaign::{CampaignConfig, CampaignSummary, OutFormat};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "numrad", version, about = "Numerical radius computations and inequality verification campaigns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Numerical radius, operator norm and their ratio for a matrix file.
    Radius {
        /// Matrix JSON file `{"n": int, "data": [[re, im], ...]}`.
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Run every checker instance of a campaign and report slacks.
    Verify(CampaignArgs),
    /// Per-instance lhs / middle / rhs table for chain checks.
    Gap(CampaignArgs),
    /// Stress campaign with extreme scales and near-degenerate operands;
    /// failing inputs are dumped for reproduction.
    Search {
        #[command(flatten)]
        campaign: CampaignArgs,
        /// Directory for failure dumps; defaults to the directory of --out.
        #[arg(long)]
        dump_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct CampaignArgs {
    /// Comma-separated checker names (with or without the `check_` prefix);
    /// all applicable checkers when omitted.
    #[arg(long)]
    pub checks: Option<String>,
    /// Comma-separated families; `nilpotent_block` selects the block
    /// square-zero construction.
    #[arg(long, default_value = "general,hermitian,normal,unitary,nilpotent,scalar")]
    pub families: String,
    #[arg(long, default_value = "1,2,4")]
    pub sizes: String,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 64)]
    pub quad_points: usize,
    #[arg(long, default_value_t = 8)]
    pub theta_grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    pub format: String,
    /// Target operator-norm scale of generated operands.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Keep generated operands at their drawn scale instead of rescaling
    /// each instance to unit norm.
    #[arg(long)]
    pub no_normalize: bool,
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty())
}

impl CampaignArgs {
    /// Builds the campaign; `default_checks` applies when `--checks` is absent.
    pub fn to_config(&self, default_checks: &[CheckKind]) -> Result<CampaignConfig, CliError> {
        let checks = match &self.checks {
            None => default_checks.to_vec(),
            Some(s) => split_list(s)
                .map(|c| c.parse::<CheckKind>().map_err(|e| CliError::Usage(e.to_string())))
                .collect::<Result<_, _>>()?,
        };
        let families = split_list(&self.families).map(str::parse).collect::<Result<_, _>>()?;
        let sizes = split_list(&self.sizes)
            .map(|s| s.parse::<usize>().map_err(|_| CliError::Usage(format!("invalid size `{s}`"))))
            .collect::<Result<_, _>>()?;
        let config = CampaignConfig {
            checks,
            families,
            sizes,
            trials: self.trials,
            seed: self.seed,
            tol: self.tol,
            quad_points: self.quad_points,
            theta_grid: self.theta_grid,
            out_path: self.out.clone(),
            out_format: self.format.parse()?,
            scale: self.scale,
            normalize: !self.no_normalize,
        };
        config.validate()?;
        Ok(config)
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                return 2;
            }
            let _ = stdout.write_all(text.as_bytes());
            return 0;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "numrad: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Radius { matrix, tol } => cmd_radius(&matrix, tol, stdout),
        Command::Verify(args) => cmd_verify(&args.to_config(&CheckKind::ALL)?, stdout),
        Command::Gap(args) => {
            let chains: Vec<CheckKind> = CheckKind::ALL.into_iter().filter(|k| k.is_chain()).collect();
            cmd_gap(&args.to_config(&chains)?, stdout)
        }
        Command::Search { campaign, dump_dir } => {
            let config = campaign.to_config(&CheckKind::ALL)?;
            let dir = dump_dir.unwrap_or_else(|| default_dump_dir(config.out_path.as_deref()));
            cmd_search(&config, &dir, stdout, stderr)
        }
    }
}

fn default_dump_dir(out: Option<&Path>) -> PathBuf {
    match out.and_then(Path::parent) {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

/// Prints `{argmax_theta, norm, omega, ratio}` for the matrix in `path`.
pub fn cmd_radius(path: &Path, tol: f64, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let a = matrix_from_json(&text)?;
    let r = numerical_radius(&a, tol)?;
    let norm = a.operator_norm(tol)?;
    let ratio = if norm > 0.0 { r.value / norm } else { f64::NAN };
    let doc = json!({
        "omega": r.value,
        "norm": norm,
        "ratio": ratio,
        "argmax_theta": r.argmax_theta,
    });
    stdout.write_all(to_json_string(&doc).as_bytes())?;
    Ok(0)
}

fn summary_line(stdout: &mut dyn Write, config: &CampaignConfig, summary: &CampaignSummary) -> Result<(), CliError> {
    // With a report file the summary also goes to standard output.
    if config.out_path.is_some() {
        let v = serde_json::to_value(summary).map_err(|e| CliError::Io(e.to_string()))?;
        stdout.write_all(to_json_string(&v).as_bytes())?;
    }
    Ok(())
}

pub fn cmd_verify(config: &CampaignConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let outcomes = campaign::verify(config)?;
    let reports: Vec<_> = outcomes.iter().map(|o| o.report.clone()).collect();
    let summary = CampaignSummary::from_reports(&reports);
    let text = match config.out_format {
        OutFormat::Json => output::campaign_json(config, &summary, &outcomes)?,
        OutFormat::Csv => output::campaign_csv(&outcomes)?,
    };
    output::emit(&text, config.out_path.as_deref(), stdout)?;
    summary_line(stdout, config, &summary)?;
    Ok(if summary.failed == 0 { 0 } else { 1 })
}

pub fn cmd_gap(config: &CampaignConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (outcomes, rows) = campaign::gap(config)?;
    let reports: Vec<_> = outcomes.iter().map(|o| o.report.clone()).collect();
    let summary = CampaignSummary::from_reports(&reports);
    let text = match config.out_format {
        OutFormat::Json => output::gap_json(&summary, &rows)?,
        OutFormat::Csv => output::gap_csv(&rows)?,
    };
    output::emit(&text, config.out_path.as_deref(), stdout)?;
    summary_line(stdout, config, &summary)?;
    let ok = summary.failed == 0 && rows.iter().all(|r| r.within(config.tol));
    Ok(if ok { 0 } else { 1 })
}

pub fn cmd_search(config: &CampaignConfig, dump_dir: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let outcomes = campaign::search(config)?;
    for o in outcomes.iter().filter(|o| !o.report.passed) {
        for p in output::dump_failure(dump_dir, o, config.tol)? {
            writeln!(stderr, "numrad: violation in {}, input written to {}", o.report.check_name, p.display())?;
        }
    }
    let reports: Vec<_> = outcomes.iter().map(|o| o.report.clone()).collect();
    let summary = CampaignSummary::from_reports(&reports);
    let text = match config.out_format {
        OutFormat::Json => output::campaign_json(config, &summary, &outcomes)?,
        OutFormat::Csv => output::campaign_csv(&outcomes)?,
    };
    output::emit(&text, config.out_path.as_deref(), stdout)?;
    summary_line(stdout, config, &summary)?;
    Ok(if summary.failed == 0 { 0 } else { 1 })
}
