//! `ent` — evaluate, sweep, and classify multipartite entanglement
//! measures from the command line.

mod commands;
mod error;
mod fmt;
mod report;
mod statefile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ent", version, about = "Multipartite entanglement measures for pure qudit states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate measures on a state file or a catalog state
    Measure(MeasureArgs),
    /// Sweep the two-qubit chamber family to CSV
    Weyl(WeylArgs),
    /// Exhaustive permutation-state sweeps, class tables, and audits
    Perm(PermArgs),
    /// List catalog states or emit one as a state file
    Catalog(CatalogArgs),
}

#[derive(Args)]
pub struct SolverArgs {
    /// Accept polygon solutions below this equation residual
    #[arg(long, default_value_t = 1e-10)]
    pub solver_residual_tol: f64,
    /// Deterministic polygon solver starts
    #[arg(long, default_value_t = 32)]
    pub solver_max_restarts: u32,
}

#[derive(Args)]
pub struct MeasureArgs {
    /// State file (versioned JSON) to evaluate
    #[arg(long, conflicts_with = "named")]
    pub input: Option<PathBuf>,
    /// Catalog state name (see `ent catalog --list`)
    #[arg(long)]
    pub named: Option<String>,
    /// Party count for ghz/w
    #[arg(long)]
    pub n: Option<usize>,
    /// Local dimension for ghz/identity/swap
    #[arg(long)]
    pub d: Option<usize>,
    /// Family parameters, e.g. "a=1,b=0.5"
    #[arg(long)]
    pub params: Option<String>,
    /// Comma-separated subset of gme_ame,scott,polygon
    #[arg(long, default_value = "gme_ame,scott")]
    pub measures: String,
    /// Write the JSON report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run seed for the polygon solver
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeylMode {
    Sweep,
    Edge,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EdgeArg {
    #[value(name = "local_cnot")]
    LocalCnot,
    #[value(name = "swap_dcnot")]
    SwapDcnot,
}

#[derive(Args)]
pub struct WeylArgs {
    /// Chamber sampling or a single-parameter edge grid
    #[arg(long, value_enum, default_value_t = WeylMode::Sweep)]
    pub mode: WeylMode,
    /// Which edge to grid in edge mode
    #[arg(long, value_enum)]
    pub edge: Option<EdgeArg>,
    /// Number of rows
    #[arg(long)]
    pub samples: usize,
    /// Run seed for chamber sampling and the polygon solver
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV path
    #[arg(long)]
    pub csv: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnphaseArg {
    None,
    Binary,
}

#[derive(Args)]
pub struct PermArgs {
    /// Local dimension (2 or 3)
    #[arg(long)]
    pub d: usize,
    /// Comma-separated subset of gme_ame,scott,polygon
    #[arg(long, default_value = "gme_ame,scott")]
    pub measures: String,
    /// Cross every permutation with all binary sign patterns (d = 2)
    #[arg(long, value_enum, default_value_t = EnphaseArg::None)]
    pub enphase: EnphaseArg,
    /// Per-record CSV output
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Class-table CSV output
    #[arg(long)]
    pub classes: Option<PathBuf>,
    /// Machine-readable audit (JSON) against the reference tables
    #[arg(long)]
    pub audit: Option<PathBuf>,
    /// Worker threads (default: ENT_THREADS or all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Run seed for the polygon solver
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Merge tolerance for polygon classification
    #[arg(long, default_value_t = 1e-9)]
    pub class_tol: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args)]
pub struct CatalogArgs {
    /// Print all catalog names with their parameter schemas
    #[arg(long)]
    pub list: bool,
    /// Emit this catalog state as a state file
    #[arg(long)]
    pub emit: Option<String>,
    /// Family parameters, e.g. "a=1,b=0.5"
    #[arg(long)]
    pub params: Option<String>,
    /// Party count for ghz/w
    #[arg(long)]
    pub n: Option<usize>,
    /// Local dimension for ghz/identity/swap
    #[arg(long)]
    pub d: Option<usize>,
    /// Output path for --emit
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    // die quietly when a pipe closes, like any other unix filter
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Measure(args) => commands::cmd_measure(args),
        Command::Weyl(args) => commands::cmd_weyl(args),
        Command::Perm(args) => commands::cmd_perm(args),
        Command::Catalog(args) => commands::cmd_catalog(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
