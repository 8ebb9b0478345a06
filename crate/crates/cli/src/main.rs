//! `vanish`: decompose, decide, construct and search step functions from the
//! command line. Every command prints one JSON report on stdout.
//!
//! Exit codes: 0 holds or succeeded, 1 fails, 2 usage or input error.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "vanish", version, about = "Exact vanishing-average tests for step functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generalized Walsh expansion of a function.
    Decompose(DecomposeArgs),
    /// Decide the vanishing-average condition exactly.
    Check(CheckArgs),
    /// Build a seeded solution.
    Construct(ConstructArgs),
    /// Brute-force search over grid partitions.
    Oracle(OracleArgs),
    /// Level coefficients and the set K(m, r, alpha).
    Kset(KsetArgs),
    /// Test a product-set property P(F, alpha) on a graphon.
    GraphonTest(GraphonArgs),
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Step function JSON.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Write the expansion (or projection) JSON here as well.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Report only the projection onto matching levels, e.g. "<=2" or "=1".
    #[arg(long, allow_hyphen_values = true)]
    pub project: Option<String>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Comma-separated measures, e.g. "1/3,2/3".
    #[arg(long)]
    pub alpha: String,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(short)]
    pub m: usize,
    #[arg(short)]
    pub n: usize,
    /// Comma-separated measures; a single value with --symmetric.
    #[arg(long)]
    pub alpha: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the function JSON here.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Build a symmetric solution of the A^(m-r) x (complement A)^r family.
    #[arg(long, requires = "r")]
    pub symmetric: bool,
    #[arg(short)]
    pub r: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(long)]
    pub alpha: String,
    /// Comma-separated refinement factors (default 1..max(2, m)).
    #[arg(long)]
    pub refine: Option<String>,
    /// Maximum profiles scanned exhaustively per factor.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct KsetArgs {
    #[arg(short)]
    pub m: usize,
    #[arg(short)]
    pub r: usize,
    #[arg(long)]
    pub alpha: String,
}

#[derive(Debug, Args)]
pub struct GraphonArgs {
    /// Graph JSON: {"m": .., "edges": [[i, j], ..]}.
    #[arg(long)]
    pub graph: PathBuf,
    /// Graphon JSON: {"n": .., "values": [["p/q", ..], ..]}.
    #[arg(long)]
    pub graphon: PathBuf,
    #[arg(long)]
    pub alpha: String,
    /// Target edge density.
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub refine: Option<String>,
    /// Average the integrand over all orderings of the vertices first.
    #[arg(long)]
    pub symmetrized: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    let outcome = match &cli.command {
        Command::Decompose(args) => commands::decompose(args),
        Command::Check(args) => commands::check(args),
        Command::Construct(args) => commands::construct(args),
        Command::Oracle(args) => commands::oracle(args),
        Command::Kset(args) => commands::kset(args),
        Command::GraphonTest(args) => commands::graphon_test(args),
    };
    match outcome {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report.json).expect("reports serialize");
            // a closed pipe is not an error worth reporting
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(if report.success { 0 } else { 1 })
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
