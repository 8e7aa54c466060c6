//! Seeded experiment runs and their reports.

mod commands;
mod real;
mod tabular;

pub use commands::{
    cmd_generate, cmd_histories, cmd_run, cmd_share, GenerateResult, HistoriesResult, RunResult, ShareResult,
};
pub use real::{reals, Checked, Real};
pub use tabular::flatten;

use std::time::Instant;

use serde::Serialize;

use crate::algorithms::{Choice, IterationRule};
use crate::error::{Error, Result};
use crate::families::FamilyKind;
use crate::generator::Strategy;

/// JSON Schema every report validates against.
pub const REPORT_SCHEMA: &str = include_str!("../../schema/report.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Run,
    Share,
    Histories,
    Generate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub family: FamilyKind,
    pub n: usize,
    /// A label or `random`.
    pub b: String,
    pub seed: u64,
    pub format: Format,
    pub restarts: usize,
    pub threshold: Option<Real>,
    pub max_oracle_calls: usize,
    pub strategy: Strategy,
    pub iteration_rule: IterationRule,
    pub extended: bool,
    pub sharp: bool,
    pub uneven: bool,
    #[serde(skip)]
    pub timings: bool,
}

impl ExperimentConfig {
    pub fn new(command: Command, family: FamilyKind, n: usize) -> Self {
        ExperimentConfig {
            command,
            family,
            n,
            b: "random".into(),
            seed: 0,
            format: Format::Json,
            restarts: 8,
            threshold: None,
            max_oracle_calls: 6,
            strategy: Strategy::Joint,
            iteration_rule: IterationRule::Floor,
            extended: false,
            sharp: false,
            uneven: false,
            timings: false,
        }
    }

    pub fn choice(&self) -> Result<Choice> {
        self.b.parse()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub unitarity: Real,
    pub norm: Real,
    pub eigenvalue_floor: Real,
    pub fidelity: Real,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            unitarity: Real(crate::quantum::UNITARY_TOL),
            norm: Real(crate::quantum::NORM_TOL),
            eigenvalue_floor: Real(crate::quantum::EIGEN_FLOOR),
            fidelity: Real(1e-12),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Run(RunResult),
    Share(ShareResult),
    Histories(HistoriesResult),
    Generate(GenerateResult),
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub total_seconds: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub artifact: &'static str,
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub tolerances: Tolerances,
    pub result: Outcome,
    /// Wall clock; present only when asked for, since it breaks byte identity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn render(&self) -> Result<String> {
        match self.config.format {
            Format::Json => self.to_json(),
            Format::Csv => flatten(&self.to_json()?),
        }
    }
}

/// Runs the configured command.
pub fn execute(config: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    let result = match config.command {
        Command::Run => Outcome::Run(cmd_run(config)?),
        Command::Share => Outcome::Share(cmd_share(config)?),
        Command::Histories => Outcome::Histories(cmd_histories(config)?),
        Command::Generate => Outcome::Generate(cmd_generate(config)?),
    };
    let timings = config.timings.then(|| Timings { total_seconds: Real(start.elapsed().as_secs_f64()) });
    Ok(Report {
        artifact: "oraclelab",
        version: env!("CARGO_PKG_VERSION"),
        config: config.clone(),
        tolerances: Tolerances::default(),
        result,
        timings,
    })
}

/// Parses a saved report and writes it again in `format`.
pub fn reemit(text: &str, format: Format) -> Result<String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    if value.get("artifact").and_then(|a| a.as_str()) != Some("oraclelab") {
        return Err(Error::Config("not an oraclelab report".into()));
    }
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).map_err(|e| Error::Config(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => flatten(text),
    }
}

/// Errors that mean a computation ran but fell short, as opposed to bad input.
pub fn is_numerical_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::IterateCap { .. } | Error::RepetitionCap(_) | Error::SearchBudget(_) | Error::ImpossibleOutcome(_)
    )
}
