//! Suites of manifest runs and their reports: one JSON record per row plus an
//! aligned text table.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::config::{EvaluatorId, SearchMode};
use crate::error::{Error, ParseError, Position, Result};
use crate::model::{GpProblem, Instance};
use crate::pddl::{load_gp_problem, load_instance, load_validation, read_text, GpManifest};
use crate::search::{search_with, SearchConfig, SearchMonitor, SearchOutcome, SearchResult};
use crate::vm::{validate, RunOptions};

/// Per-run changes to the search configuration of a manifest.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RowOverrides {
    pub mode: Option<SearchMode>,
    pub v: Option<usize>,
    pub evaluators: Option<Vec<EvaluatorId>>,
    /// Step budget per run during search.
    pub budget: Option<u64>,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    pub no_pruning: bool,
    /// Extra held-out instance files validated after a solution is found.
    pub extra_validation: Vec<PathBuf>,
}

impl RowOverrides {
    pub fn config(&self, manifest: &GpManifest) -> SearchConfig {
        let mut c = SearchConfig::new(
            self.mode.unwrap_or(manifest.mode),
            self.v.unwrap_or(manifest.v),
            self.evaluators.clone().unwrap_or_else(|| manifest.evaluators.clone()),
        );
        if let Some(b) = self.budget {
            c.run.budget = b;
        }
        c.time_limit = self.time_limit;
        c.node_limit = self.node_limit;
        c.novelty_pruning = !self.no_pruning;
        c
    }

    /// Applies one `key=value` setting of a suite line.
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let num = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| Error::Config(format!("{key} must be a non-negative integer, found {v:?}")))
        };
        match key {
            "mode" => self.mode = Some(value.parse()?),
            "v" => self.v = Some(num(value)? as usize),
            "evaluators" => self.evaluators = Some(EvaluatorId::parse_list(value)?),
            "budget" => self.budget = Some(num(value)?),
            "time" => self.time_limit = Some(Duration::from_secs(num(value)?)),
            "nodes" => self.node_limit = Some(num(value)?),
            "pruning" => {
                self.no_pruning = match value {
                    "on" => false,
                    "off" => true,
                    _ => return Err(Error::Config(format!("pruning must be on or off, found {value:?}"))),
                }
            }
            _ => return Err(Error::Config(format!("unknown suite key {key:?}"))),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteEntry {
    pub manifest: PathBuf,
    pub overrides: RowOverrides,
}

/// Parses a suite: one `<manifest> [key=value ...]` per line, `#` comments.
/// Keys: mode, v, evaluators, budget, time (seconds), nodes, pruning.
pub fn parse_suite(text: &str, base: &Path) -> Result<Vec<SuiteEntry>> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        let mut words = line.split_whitespace();
        let Some(path) = words.next() else { continue };
        let mut overrides = RowOverrides::default();
        for w in words {
            let pos = Position { line: i + 1, column: 1 };
            let at = |m: String| Error::Parse(ParseError::semantic(pos, m));
            let (k, v) = w.split_once('=').ok_or_else(|| at(format!("expected key=value, found {w:?}")))?;
            overrides.set(k, v).map_err(|e| match e {
                Error::Config(m) => at(m),
                other => other,
            })?;
        }
        entries.push(SuiteEntry {
            manifest: base.join(path),
            overrides,
        });
    }
    Ok(entries)
}

pub fn read_suite(path: &Path) -> Result<Vec<SuiteEntry>> {
    let text = read_text(path)?;
    parse_suite(&text, path.parent().unwrap_or(Path::new(".")))
        .map_err(|e| Error::in_file(path.display().to_string(), e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub instance: String,
    pub verdict: String,
}

/// One (domain, configuration) row. Time is kept out of the JSON record so
/// reruns compare byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub domain: String,
    pub config: String,
    /// `solved`, `unsolvable`, `limit:<kind>` or `error`.
    pub outcome: String,
    #[serde(skip)]
    pub time: f64,
    pub expanded: u64,
    pub evaluated: u64,
    pub escalations: u64,
    pub solution: Option<String>,
    /// Held-out verdicts, filled only for solved rows.
    pub validation: Vec<Verdict>,
    pub error: Option<String>,
}

impl ReportRow {
    pub fn validated(&self) -> bool {
        self.solution.is_some() && self.validation.iter().all(|v| v.verdict == "Solved")
    }

    fn failed(domain: String, config: String, err: &Error) -> Self {
        ReportRow {
            domain,
            config,
            outcome: "error".into(),
            time: 0.0,
            expanded: 0,
            evaluated: 0,
            escalations: 0,
            solution: None,
            validation: Vec::new(),
            error: Some(err.to_string()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub rows: Vec<ReportRow>,
}

impl RunReport {
    /// One JSON object per row, newline terminated.
    pub fn json_lines(&self) -> String {
        self.rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("rows serialize") + "\n")
            .collect()
    }

    pub fn table(&self) -> String {
        let header = ["domain", "config", "result", "T(s)", "Ex", "Ev", "held-out"];
        let cells: Vec<[String; 7]> = self
            .rows
            .iter()
            .map(|r| {
                let passed = r.validation.iter().filter(|v| v.verdict == "Solved").count();
                [
                    r.domain.clone(),
                    r.config.clone(),
                    r.outcome.clone(),
                    format!("{:.2}", r.time),
                    r.expanded.to_string(),
                    r.evaluated.to_string(),
                    if r.solution.is_some() { format!("{passed}/{}", r.validation.len()) } else { "-".into() },
                ]
            })
            .collect();
        let mut width = header.map(str::len);
        for row in &cells {
            for (w, c) in width.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let mut line = |row: &[String]| {
            let parts: Vec<String> = row
                .iter()
                .zip(width)
                .enumerate()
                .map(|(i, (c, w))| if i < 3 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&header.map(String::from));
        for row in &cells {
            line(row);
        }
        out
    }
}

/// Solves one manifest and validates any solution on its held-out instances.
pub fn run_manifest_with<M: SearchMonitor>(
    manifest: &GpManifest,
    overrides: &RowOverrides,
    monitor: &mut M,
) -> Result<(ReportRow, SearchResult)> {
    let problem = load_gp_problem(manifest)?;
    let config = overrides.config(manifest);
    let result = search_with(&problem, &config, monitor)?;
    let mut held_out = load_validation(manifest, &problem.domain)?;
    for p in &overrides.extra_validation {
        held_out.push(load_instance(&problem.domain, p)?);
    }
    let row = report_row(&problem, &config, &result, held_out)?;
    Ok((row, result))
}

pub fn report_row(
    problem: &GpProblem,
    config: &SearchConfig,
    result: &SearchResult,
    held_out: Vec<Instance>,
) -> Result<ReportRow> {
    let (outcome, solution, validation) = match &result.outcome {
        SearchOutcome::Solved(p) => {
            let verdicts = if held_out.is_empty() {
                Vec::new()
            } else {
                let names: Vec<String> = held_out.iter().map(|i| i.name().to_string()).collect();
                let vp = problem.with_instances(held_out)?;
                names
                    .into_iter()
                    .zip(validate(p, &vp, None, &RunOptions::default()))
                    .map(|(instance, o)| Verdict {
                        instance,
                        verdict: o.verdict(),
                    })
                    .collect()
            };
            ("solved".to_string(), Some(p.display(&problem.domain).to_string()), verdicts)
        }
        SearchOutcome::Unsolvable => ("unsolvable".to_string(), None, Vec::new()),
        SearchOutcome::ResourceLimit(k) => (format!("limit:{}", k.name()), None, Vec::new()),
    };
    Ok(ReportRow {
        domain: problem.domain.name().to_string(),
        config: config.label(),
        outcome,
        time: result.stats.elapsed.as_secs_f64(),
        expanded: result.stats.expanded,
        evaluated: result.stats.evaluated,
        escalations: result.stats.escalations,
        solution,
        validation,
        error: None,
    })
}

/// Runs every suite entry in order; a failing row is recorded and the run
/// continues.
pub fn run_suite_with<M: SearchMonitor>(entries: &[SuiteEntry], monitor: &mut M) -> RunReport {
    let rows = entries
        .iter()
        .map(|e| {
            let manifest = GpManifest::read(&e.manifest);
            let outcome = manifest.and_then(|m| run_manifest_with(&m, &e.overrides, monitor).map(|(r, _)| r));
            outcome.unwrap_or_else(|err| {
                let name = e.manifest.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                ReportRow::failed(name, String::new(), &err)
            })
        })
        .collect();
    RunReport { rows }
}

pub fn run_suite(entries: &[SuiteEntry]) -> RunReport {
    run_suite_with(entries, &mut ())
}
