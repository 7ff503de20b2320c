//! Batch driver: verification suites, point evaluations, residues, scans and
//! coefficient lookups, reported as JSON or CSV.

mod commands;
mod output;
mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use quadseries::quadfields::{l1_cache_store, L1Cache};

pub use output::render;

/// Scans beyond this length need `long_run`.
pub const DEFAULT_SCAN_LIMIT: u64 = 100_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] quadseries::Error),
    #[error("output: {0}")]
    Output(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Verify,
    Eval,
    Residue,
    Scan,
    Coeff,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Eval => "eval",
            Command::Residue => "residue",
            Command::Scan => "scan",
            Command::Coeff => "coeff",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub params: BTreeMap<String, String>,
    pub output_format: OutputFormat,
    pub thread_count: usize,
    pub cache_path: Option<PathBuf>,
    pub long_run: bool,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            params: BTreeMap::new(),
            output_format: OutputFormat::Json,
            thread_count: 1,
            cache_path: None,
            long_run: false,
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.thread_count == 0 {
            return Err(CliError::Config("thread_count must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn get<T: FromStr>(&self, key: &str) -> CliResult<Option<T>> {
        match self.params.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("cannot parse --{key} value {raw:?}"))),
        }
    }

    pub(crate) fn require<T: FromStr>(&self, key: &str) -> CliResult<T> {
        self.get(key)?.ok_or_else(|| CliError::Config(format!("missing --{key}")))
    }

    pub(crate) fn flag(&self, key: &str) -> bool {
        self.params.get(key).is_some_and(|v| v == "true")
    }

    /// `s` given as `re` or `re,im`.
    pub(crate) fn complex(&self, key: &str, default: C) -> CliResult<C> {
        let Some(raw) = self.params.get(key) else {
            return Ok(default);
        };
        parse_complex(raw).ok_or_else(|| CliError::Config(format!("cannot parse --{key} value {raw:?}")))
    }
}

pub fn parse_complex(raw: &str) -> Option<C> {
    let mut parts = raw.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next()?.ok()?;
    let im = match parts.next() {
        None => 0.0,
        Some(v) => v.ok()?,
    };
    if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
        return None;
    }
    Some(C::new(re, im))
}

/// A real number or a complex one, serialized as a plain number when real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Real(f64),
    Complex { re: f64, im: f64 },
}

impl Scalar {
    pub fn magnitude(self) -> f64 {
        match self {
            Scalar::Real(x) => x.abs(),
            Scalar::Complex { re, im } => re.hypot(im),
        }
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Real(x)
    }
}

impl From<C> for Scalar {
    fn from(z: C) -> Self {
        Scalar::Complex { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub id: String,
    pub paper_tag: String,
    pub value: Option<Scalar>,
    pub target: Option<Scalar>,
    pub tolerance: Option<f64>,
    /// `None` when the row is informational or its precondition fails.
    pub pass: Option<bool>,
    pub heuristic_tail: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_estimate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ResultRow {
    pub fn value(id: impl Into<String>, tag: &str, value: impl Into<Scalar>) -> Self {
        Self {
            id: id.into(),
            paper_tag: tag.into(),
            value: Some(value.into()),
            target: None,
            tolerance: None,
            pass: None,
            heuristic_tail: false,
            truncation: None,
            tail_estimate: None,
            note: None,
        }
    }

    /// A check `|value − target| ≤ tolerance` (absolute).
    pub fn check(id: impl Into<String>, tag: &str, value: impl Into<Scalar>, target: impl Into<Scalar>, tolerance: f64) -> Self {
        let (value, target) = (value.into(), target.into());
        let gap = scalar_gap(value, target);
        Self { target: Some(target), tolerance: Some(tolerance), pass: Some(gap <= tolerance), ..Self::value(id, tag, value) }
    }

    /// A check whose outcome is decided by the caller.
    pub fn verdict(id: impl Into<String>, tag: &str, value: impl Into<Scalar>, pass: bool) -> Self {
        Self { pass: Some(pass), ..Self::value(id, tag, value) }
    }

    pub fn skipped(id: impl Into<String>, tag: &str, note: impl Into<String>) -> Self {
        Self { value: None, note: Some(note.into()), ..Self::value(id, tag, 0.0) }
    }

    pub fn failed(id: impl Into<String>, tag: &str, err: &dyn std::fmt::Display) -> Self {
        Self { value: None, pass: Some(false), note: Some(err.to_string()), ..Self::value(id, tag, 0.0) }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

pub(crate) fn scalar_gap(a: Scalar, b: Scalar) -> f64 {
    let z = |s: Scalar| match s {
        Scalar::Real(x) => C::new(x, 0.0),
        Scalar::Complex { re, im } => C::new(re, im),
    };
    (z(a) - z(b)).norm()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Command,
    pub config: RunConfig,
    pub results: Vec<ResultRow>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass != Some(false))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
    InvalidConfig,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
            Status::InvalidConfig => 2,
        }
    }
}

/// Runs one command. Invalid configurations yield `InvalidConfig` and an
/// empty report; failed checks still report every row.
pub fn run(config: &RunConfig) -> (Status, Report) {
    let start = Instant::now();
    let outcome = execute(config);
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let mk = |results| Report { command: config.command, config: config.clone(), results, elapsed_ms };
    match outcome {
        Ok(rows) => {
            let report = mk(rows);
            let status = if report.all_pass() { Status::Ok } else { Status::CheckFailed };
            (status, report)
        }
        Err(e) => {
            let report = mk(vec![ResultRow::failed("config", "", &e)]);
            (Status::InvalidConfig, report)
        }
    }
}

fn execute(config: &RunConfig) -> CliResult<Vec<ResultRow>> {
    config.validate()?;
    if let Some(path) = &config.cache_path {
        if path.exists() {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cache {path:?}: {e}")))?;
            L1Cache::global().merge(L1Cache::parse(&text)?);
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.thread_count)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let rows = pool.install(|| match config.command {
        Command::Verify => verify::run(config),
        Command::Eval => commands::eval(config),
        Command::Residue => commands::residue(config),
        Command::Scan => commands::scan(config),
        Command::Coeff => commands::coeff(config),
    })?;
    if let Some(path) = &config.cache_path {
        l1_cache_store(L1Cache::global(), path)?;
    }
    Ok(rows)
}
