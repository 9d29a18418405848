//! Command-line front end.
//!
//! Exit codes: `0` success, `1` I/O failure, `2` malformed input or usage,
//! `3` numerical failure, `4` a group with fewer than two observations.

pub mod data;
pub mod format;
pub mod report;
pub mod scenarios;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::inference::{enumerate_alternative_patterns, format_pattern, Alternative, MarginalMode};
use crate::models::CovarianceKind;
use crate::simulation::{run_table, SimOptions};
use report::AnalysisConfig;

pub const EXIT_IO: u8 = 1;
pub const EXIT_SCHEMA: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;
pub const EXIT_GROUP: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn schema(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_SCHEMA,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DegenerateGroup { .. } => EXIT_GROUP,
            Error::SingularDesign(_) | Error::Nonconvergence(_) | Error::NotPsd { .. } => {
                EXIT_NUMERICAL
            }
            _ => EXIT_SCHEMA,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "aiaiut",
    version,
    about = "IUT, UIT and aiaUIT for correlated endpoints"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo power of the scenarios in a JSON file.
    Simulate(SimulateArgs),
    /// Analyse the embedded dose-finding study.
    Example(ExampleArgs),
    /// Analyse a CSV data set with Dunnett contrasts per endpoint.
    Analyze(AnalyzeArgs),
    /// List the alternative patterns of J elementary hypotheses.
    Patterns {
        #[arg(long)]
        j: usize,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub scenarios: PathBuf,
    #[arg(long)]
    pub sims: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub ci_out: Option<PathBuf>,
    /// Also write the data set as CSV (columns Dose, EP1, EP2).
    #[arg(long)]
    pub export_data: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub group_col: String,
    /// Control level; defaults to the first level in sorted order.
    #[arg(long)]
    pub control: Option<String>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = AlternativeArg::Greater)]
    pub alternative: AlternativeArg,
    #[arg(long, value_enum, default_value_t = CovArg::Sandwich)]
    pub cov: CovArg,
    /// Marginal p-values: per hypothesis, or adjusted within each endpoint.
    #[arg(long, value_enum, default_value_t = MarginalArg::Univariate)]
    pub marginal: MarginalArg,
    /// Endpoint columns (comma separated); all other columns by default.
    #[arg(long, value_delimiter = ',')]
    pub endpoints: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub ci_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlternativeArg {
    Greater,
    Less,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CovArg {
    Model,
    Sandwich,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MarginalArg {
    Univariate,
    WithinEndpoint,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_SCHEMA } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate(args) => simulate(&args),
        Command::Example(args) => example(&args),
        Command::Analyze(args) => analyze(&args),
        Command::Patterns { j } => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            for p in enumerate_alternative_patterns(j)? {
                writeln!(lock, "{}", format_pattern(&p))
                    .map_err(|e| CliError::io(Path::new("stdout"), e))?;
            }
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Writes to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    let overrides = scenarios::Overrides {
        alpha: args.alpha,
        sims: args.sims,
        seed: args.seed,
    };
    let records = scenarios::parse(&read(&args.scenarios)?, overrides)?;
    let opts = SimOptions {
        workers: args.workers,
        ..SimOptions::default()
    };
    let total = records.len();
    let mut rows = Vec::with_capacity(total);
    let mut failures = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let start = Instant::now();
        eprintln!("[{}/{total}] {} replicates", i + 1, rec.scenario.sims);
        let result = run_table(std::slice::from_ref(&rec.scenario), &opts)?
            .pop()
            .expect("one row per scenario");
        match result {
            Ok(row) => {
                if row.resampled > 0 {
                    eprintln!(
                        "[{}/{total}] {} degenerate data sets redrawn",
                        i + 1,
                        row.resampled
                    );
                }
                eprintln!("[{}/{total}] done in {:.1?}", i + 1, start.elapsed());
                rows.push(row);
            }
            Err(e) => failures.push(format!("row {}: {e}", i + 1)),
        }
    }
    if !failures.is_empty() {
        return Err(CliError::numerical(failures.join("; ")));
    }
    write_atomic(&args.out, &table::to_csv(&records, &rows))
}

fn example(args: &ExampleArgs) -> Result<(), CliError> {
    let table = data::dose_finding();
    if let Some(path) = &args.export_data {
        write_atomic(path, &table.to_csv("Dose"))?;
    }
    let cfg = AnalysisConfig {
        alpha: args.alpha,
        ..AnalysisConfig::default()
    };
    report(
        table.into_dataset(Some("C"))?,
        &cfg,
        &args.out,
        args.ci_out.as_deref(),
    )
}

fn analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let table = data::read_table(&read(&args.data)?, &args.group_col, &args.endpoints)?;
    let cfg = AnalysisConfig {
        alpha: args.alpha,
        alternative: match args.alternative {
            AlternativeArg::Greater => Alternative::Greater,
            AlternativeArg::Less => Alternative::Less,
            AlternativeArg::TwoSided => Alternative::TwoSided,
        },
        covariance: match args.cov {
            CovArg::Model => CovarianceKind::ModelBased,
            CovArg::Sandwich => CovarianceKind::Sandwich,
        },
        marginal: match args.marginal {
            MarginalArg::Univariate => MarginalMode::Univariate,
            MarginalArg::WithinEndpoint => MarginalMode::WithinEndpoint,
        },
    };
    report(
        table.into_dataset(args.control.as_deref())?,
        &cfg,
        &args.out,
        args.ci_out.as_deref(),
    )
}

fn report(
    data: crate::models::Dataset,
    cfg: &AnalysisConfig,
    out: &Path,
    ci_out: Option<&Path>,
) -> Result<(), CliError> {
    let analysis = report::analyze(&data, cfg)?;
    write_atomic(out, &analysis.report_csv())?;
    if let Some(path) = ci_out {
        write_atomic(path, &analysis.ci_csv())?;
    }
    print!("{}", analysis.summary());
    Ok(())
}
