use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use oraclelab::algorithms::IterationRule;
use oraclelab::families::FamilyKind;
use oraclelab::generator::Strategy;
use oraclelab::harness::{self, Command, ExperimentConfig, Format, Real, REPORT_SCHEMA};
use oraclelab::Error;

/// Simulate oracle algorithms in the time-symmetric representation.
#[derive(Parser)]
#[command(name = "oraclelab", version)]
struct Cli {
    /// Worker threads for the optimizer.
    #[arg(long, global = true, env = "ORACLELAB_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Run the canonical algorithm for a family.
    Run(Common),
    /// Enumerate sharings of b with entropies and N_a.
    Share(Common),
    /// Decompose the first oracle step into classical histories.
    Histories(Common),
    /// Build an algorithm by maximizing the success probability.
    Generate(Common),
    /// Validate a saved report and write it again.
    Report {
        input: PathBuf,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    family: FamilyKind,
    #[arg(long)]
    n: usize,
    /// Hidden label, or `random`.
    #[arg(long, default_value = "random")]
    b: String,
    #[arg(long, env = "ORACLELAB_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = 8)]
    optimizer_restarts: usize,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value_t = 6)]
    max_oracle_calls: usize,
    #[arg(long, default_value = "joint")]
    strategy: Strategy,
    #[arg(long, value_parser = parse_rule, default_value = "floor")]
    iteration_rule: IterationRule,
    /// Add the A' register that keeps a copy of the answer.
    #[arg(long)]
    extended: bool,
    /// Decompose a single basis state instead of the run's superposition.
    #[arg(long)]
    sharp: bool,
    /// Allow uneven splits for odd n.
    #[arg(long)]
    uneven: bool,
    /// Include wall-clock timings; the report is then no longer reproducible.
    #[arg(long)]
    timings: bool,
}

fn parse_rule(s: &str) -> Result<IterationRule, String> {
    match s {
        "floor" => Ok(IterationRule::Floor),
        "round" | "round_half_up" => Ok(IterationRule::RoundHalfUp),
        _ => Err(format!("unknown iteration rule `{s}`")),
    }
}

impl Common {
    fn config(&self, command: Command) -> ExperimentConfig {
        ExperimentConfig {
            command,
            family: self.family,
            n: self.n,
            b: self.b.clone(),
            seed: self.seed,
            format: self.format,
            restarts: self.optimizer_restarts,
            threshold: self.threshold.map(Real),
            max_oracle_calls: self.max_oracle_calls,
            strategy: self.strategy,
            iteration_rule: self.iteration_rule,
            extended: self.extended,
            sharp: self.sharp,
            uneven: self.uneven,
            timings: self.timings,
        }
    }
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if harness::is_numerical_failure(&e) {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

fn write(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn validate(text: &str) -> Result<(), Failure> {
    let schema: serde_json::Value = serde_json::from_str(REPORT_SCHEMA).expect("shipped schema parses");
    let validator = jsonschema::validator_for(&schema).expect("shipped schema compiles");
    let instance: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Failure::Usage(format!("report is not JSON: {e}")))?;
    let errors: Vec<String> = validator.iter_errors(&instance).map(|e| format!("{}: {e}", e.instance_path())).collect();
    if errors.is_empty() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("report does not match the schema:\n{}", errors.join("\n"))))
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let (common, command) = match &cli.command {
        Sub::Run(c) => (c, Command::Run),
        Sub::Share(c) => (c, Command::Share),
        Sub::Histories(c) => (c, Command::Histories),
        Sub::Generate(c) => (c, Command::Generate),
        Sub::Report { input, format, out } => {
            let text =
                std::fs::read_to_string(input).map_err(|e| Failure::Usage(format!("{}: {e}", input.display())))?;
            validate(&text)?;
            return write(out.as_ref(), &harness::reemit(&text, *format)?);
        }
    };
    let report = harness::execute(&common.config(command))?;
    write(common.out.as_ref(), &report.render()?)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            ExitCode::from(2)
        }
    }
}
