//! Batch front end: runs the selected suites and renders the report as JSON,
//! CSV or a text table. Rationals are always written as `p/q` strings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laws::{
    self, check_associativity, check_naturality, check_unit_laws, default_spaces,
    fiber_uniqueness_with, forced_value_chain, probe_report, probe_rows, LawReport, ProbeRow,
    Sampling, DEFAULT_FIBER_BUDGET,
};
use crate::par::Exec;
use crate::tower::candidate_by_name;

pub const TOOL_VERSION: &str = concat!("hmcheck ", env!("CARGO_PKG_VERSION"));

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET_OR_IO: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Lemmas,
    Laws,
    Fiber,
    Probe,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub n_range: (usize, usize),
    pub grid: usize,
    pub samples: u64,
    pub seed: u64,
    pub candidate: String,
    pub format: Format,
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: Command::All,
            n_range: (1, 16),
            grid: 2,
            samples: 500,
            seed: 1,
            candidate: "diagonal".into(),
            format: Format::Json,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let (low, high) = self.n_range;
        if low == 0 || low > high {
            return Err(Error::InvalidArgument(format!(
                "n range {low}:{high} must satisfy 1 <= LOW <= HIGH"
            )));
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be at least 1".into()));
        }
        if self.grid == 0 {
            return Err(Error::InvalidArgument("grid must be at least 1".into()));
        }
        if candidate_by_name(&self.candidate).is_none() {
            return Err(Error::InvalidArgument(format!(
                "unknown candidate {:?}",
                self.candidate
            )));
        }
        Ok(())
    }
}

/// The full run output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub config: RunConfig,
    pub suites: Vec<LawReport>,
    pub probe: Vec<ProbeRow>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(LawReport::passed)
    }
}

fn lemma_suites(config: &RunConfig) -> Result<Vec<LawReport>> {
    let s = Sampling::new(config.samples, config.seed);
    let checks: [fn(&Sampling) -> Result<LawReport>; 8] = [
        laws::check_linearity,
        laws::check_monotonicity,
        laws::check_coordinate_naturality,
        laws::check_unit_coordinate,
        laws::check_d_hm_metric,
        laws::check_d_hm2_metric,
        laws::check_support_criterion,
        laws::check_support_membership,
    ];
    checks.iter().map(|check| check(&s)).collect()
}

fn law_suites(config: &RunConfig) -> Result<Vec<LawReport>> {
    let mu = candidate_by_name(&config.candidate).expect("validated");
    let spaces = default_spaces();
    let s = Sampling::new(config.samples, config.seed);
    let mut out = vec![
        check_unit_laws(mu.as_ref(), &spaces, &s)?,
        check_associativity(mu.as_ref(), &spaces, &s)?,
        check_naturality(mu.as_ref(), &s)?,
    ];
    for n in config.n_range.0..=config.n_range.1 {
        out.push(forced_value_chain(n, mu.as_ref())?);
    }
    Ok(out)
}

fn fiber_suites(pairs: impl Iterator<Item = (usize, usize)>) -> Result<Vec<LawReport>> {
    pairs
        .map(|(n, m)| {
            fiber_uniqueness_with(n, m, DEFAULT_FIBER_BUDGET, Exec::default())
                .map(|o| o.to_report())
        })
        .collect()
}

fn probe_suite(config: &RunConfig) -> Result<(Vec<LawReport>, Vec<ProbeRow>)> {
    let mu = candidate_by_name(&config.candidate).expect("validated");
    let (low, high) = config.n_range;
    let rows = probe_rows(mu.as_ref(), low, high)?;
    let suites = vec![
        probe_report(mu.name(), &rows),
        laws::check_probe_convergence(low, high, config.grid)?,
    ];
    Ok((suites, rows))
}

/// Runs the suites selected by `config`.
///
/// `fiber` enumerates grid `m = --grid` for every `n` in the range; `all`
/// runs the fiber oracle for `n <= 3` and every `m <= min(grid, 2)`.
pub fn execute(config: &RunConfig) -> Result<Report> {
    config.validate()?;
    let (low, high) = config.n_range;
    let mut suites = Vec::new();
    let mut probe = Vec::new();
    if matches!(config.command, Command::Lemmas | Command::All) {
        suites.extend(lemma_suites(config)?);
    }
    if matches!(config.command, Command::Laws | Command::All) {
        suites.extend(law_suites(config)?);
    }
    match config.command {
        Command::Fiber => suites.extend(fiber_suites((low..=high).map(|n| (n, config.grid)))?),
        Command::All => {
            let m_max = config.grid.min(2);
            let pairs = (low..=high.min(3)).flat_map(|n| (1..=m_max).map(move |m| (n, m)));
            suites.extend(fiber_suites(pairs)?);
        }
        _ => {}
    }
    if matches!(config.command, Command::Probe | Command::All) {
        let (s, rows) = probe_suite(config)?;
        suites.extend(s);
        probe = rows;
    }
    Ok(Report {
        tool_version: TOOL_VERSION.into(),
        config: config.clone(),
        suites,
        probe,
    })
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("plain data serializes");
            s.push('\n');
            s
        }
        Format::Csv => emit_csv(report),
        Format::Text => emit_text(report),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Probe table first (when present), then a blank line and the suite table.
fn emit_csv(report: &Report) -> String {
    let mut out = String::new();
    if !report.probe.is_empty() {
        out.push_str("n,coordinate_distance,metric_distance,image_gap\n");
        for row in &report.probe {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                row.n, row.coordinate_distance, row.metric_distance, row.image_gap
            );
        }
    }
    if !report.suites.is_empty() {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str("law,candidate,samples,failures,verdict\n");
        for s in &report.suites {
            let verdict = if s.passed() { "pass" } else { "fail" };
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                csv_field(&s.law),
                csv_field(s.candidate.as_deref().unwrap_or("")),
                s.samples,
                s.failures.len(),
                verdict
            );
        }
    }
    out
}

fn emit_text(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", report.tool_version);
    let c = &report.config;
    let _ = writeln!(
        out,
        "command={:?} n={}:{} grid={} samples={} seed={} candidate={}",
        c.command, c.n_range.0, c.n_range.1, c.grid, c.samples, c.seed, c.candidate
    );
    if !report.suites.is_empty() {
        out.push('\n');
        let width = report.suites.iter().map(|s| s.law.len()).max().unwrap_or(0);
        for s in &report.suites {
            let verdict = if s.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "{verdict}  {:<width$}  {:<14} samples={:<6} failures={}",
                s.law,
                s.candidate.as_deref().unwrap_or("-"),
                s.samples,
                s.failures.len()
            );
            for f in s.failures.iter().take(3) {
                let _ = writeln!(
                    out,
                    "      {}: expected {} got {}",
                    f.input, f.expected, f.actual
                );
            }
        }
    }
    if !report.probe.is_empty() {
        out.push('\n');
        let _ = writeln!(
            out,
            "{:>4}  {:>20}  {:>16}  {:>9}",
            "n", "coordinate_distance", "metric_distance", "image_gap"
        );
        for row in &report.probe {
            let _ = writeln!(
                out,
                "{:>4}  {:>20}  {:>16}  {:>9}",
                row.n,
                row.coordinate_distance.to_string(),
                row.metric_distance.to_string(),
                row.image_gap.to_string()
            );
        }
    }
    let _ = writeln!(
        out,
        "\nverdict: {}",
        if report.passed() { "pass" } else { "fail" }
    );
    out
}

/// Result of a complete run: the exit status and the rendered report (absent
/// on usage or budget errors, which carry a message instead).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub output: Option<String>,
    pub message: Option<String>,
}

pub fn run(config: &RunConfig) -> RunOutcome {
    match execute(config) {
        Ok(report) => RunOutcome {
            exit_code: if report.passed() {
                EXIT_PASS
            } else {
                EXIT_FAIL
            },
            output: Some(emit_report(&report, config.format)),
            message: None,
        },
        Err(e @ Error::BudgetExceeded { .. }) => RunOutcome {
            exit_code: EXIT_BUDGET_OR_IO,
            output: None,
            message: Some(e.to_string()),
        },
        Err(e) => RunOutcome {
            exit_code: EXIT_USAGE,
            output: None,
            message: Some(e.to_string()),
        },
    }
}
