//! `biphase` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 sweep limit reached
//! without convergence, 3 a numerical check failed.

mod commands;
pub mod manifest;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{error::ErrorKind, ArgGroup, Args, Parser, Subcommand};

pub use manifest::RunManifest;
pub use output::{read_csv_numbers, read_field_csv, Cell, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SWEEP_LIMIT: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "BIPHASE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "biphase", version, about = "Two-phase membrane problem solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one problem and write the field, traces and free boundary.
    Solve(SolveArgs),
    /// Error table against the exact solution for several N and sweep counts.
    Table(TableArgs),
    /// Compare PGS with the regularized solver for several ε.
    CompareRegularized(CompareArgs),
    /// PGS against the brute-force minimizer on random small problems.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["example", "config"])))]
pub struct ProblemArgs {
    /// Built-in example.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub example: Option<u8>,
    /// Problem config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Subdivisions per axis.
    #[arg(long, default_value_t = 20)]
    pub n: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_sweeps: usize,
    /// Stop once the largest update of a sweep is below this.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Run exactly this many sweeps from a zero interior, ignoring tolerances.
    #[arg(long)]
    pub fixed_iters: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "biphase-out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    /// Sweep counts as multiples of N.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8,10")]
    pub iter_mults: Vec<usize>,
    /// Append the error of the converged solution.
    #[arg(long)]
    pub converged: bool,
    /// Output file; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub eps: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return EXIT_USAGE;
    }
    let result = match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Table(a) => commands::table(a),
        Command::CompareRegularized(a) => commands::compare_regularized(a),
        Command::OracleCheck(a) => commands::oracle_check(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize =
        raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            anyhow::anyhow!("{THREADS_ENV} must be a positive integer, got {raw:?}")
        })?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}
