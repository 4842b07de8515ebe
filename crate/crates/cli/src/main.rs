mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hadamard_lattice::Error;

/// Dual-unitary Hadamard lattice circuits: cellular automata, exact
/// statevector checks, entanglement and integrability diagnostics.
#[derive(Parser, Debug)]
#[command(name = "hadlat", version, args_override_self = true)]
pub struct Cli {
    /// Worker threads for seed scans. Output does not depend on this value.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,

    /// File of `key=value` lines supplying options for the command; flags
    /// on the command line take precedence. A `command` key selects the
    /// subcommand when none is given.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evolve a single-site Pauli seed with the symplectic automaton and
    /// write the b-coefficient grid.
    Fractal(FractalArgs),
    /// Run the rainbow-state protocol and compare it with the predicted
    /// nested Bell pairs.
    Rainbow(RainbowArgs),
    /// Generate seeded symmetric Hadamard matrices and test the Yang-Baxter
    /// equation for their gates.
    YbeScan(YbeScanArgs),
    /// Half-chain entanglement growth from a product state.
    Entropy(EntropyArgs),
    /// Verify that conserved charges commute with the Floquet operator.
    Charges(ChargesArgs),
    /// Apply a circuit read from a config file to a state.
    Simulate(SimulateArgs),
    /// Run the acceptance suite.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    F,
    Fdagger,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeedOp {
    X,
    Z,
    Xz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Pgm,
    Text,
}

#[derive(Args, Debug)]
pub struct FractalArgs {
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub alpha: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub delta: i64,
    /// Horizontal matrix: F or F†.
    #[arg(long, value_enum, default_value_t = Variant::Fdagger)]
    pub variant: Variant,
    #[arg(long, default_value_t = 32)]
    pub steps: usize,
    /// Chain length; defaults to 2·steps + 1 so the light cone never wraps.
    #[arg(long)]
    pub width: Option<usize>,
    /// Site of the seed; defaults to the centre.
    #[arg(long)]
    pub origin: Option<usize>,
    /// Single-site seed operator.
    #[arg(long, value_enum, default_value_t = SeedOp::X)]
    pub seed_op: SeedOp,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional file for the a-coefficient grid, same format.
    #[arg(long)]
    pub a_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct RainbowArgs {
    /// Local dimension; must match the matrix when given.
    #[arg(long)]
    pub q: Option<usize>,
    /// Number of nested pairs (the chain has 2n sites).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// `builtin:<name>`, a builtin name, or a matrix file.
    #[arg(long, default_value = "builtin:f2")]
    pub uh: String,
    /// Also write the report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct YbeScanArgs {
    #[arg(long)]
    pub q: usize,
    /// Number of seeds.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long, default_value_t = 0)]
    pub first_seed: u64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Sinkhorn iteration budget per seed.
    #[arg(long, default_value_t = 50_000)]
    pub max_iter: usize,
    /// CSV output; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub steps: usize,
    /// `zprod`, `xprod`, `weighted:p0,p1,…` or `weightedx:p0,p1,…`, where
    /// the p are probabilities |c_z|² (normalised if needed).
    #[arg(long, default_value = "zprod")]
    pub initial: String,
    /// Rényi index; `inf` for the min-entropy.
    #[arg(long, default_value = "1")]
    pub renyi: String,
    /// CSV output; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ChargesArgs {
    #[arg(long)]
    pub q: Option<usize>,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Symmetric Hadamard matrix for u_H; u_V is its adjoint.
    #[arg(long, default_value = "builtin:k3potts")]
    pub uh: String,
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Circuit file with keys q, N, T, boundary, u_H, u_V.
    #[arg(long)]
    pub circuit: PathBuf,
    /// Initial state file; overrides `--initial`.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// `zprod` or `xprod` when no state file is given.
    #[arg(long, default_value = "zprod")]
    pub initial: String,
    /// Step count; overrides the circuit file's T.
    #[arg(long)]
    pub steps: Option<usize>,
    /// State output; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// `all` or a comma-separated list of criterion numbers.
    #[arg(long, default_value = "all")]
    pub suite: String,
}

/// Command outcome mapped onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// A verification ran and failed (exit 1).
    Verification(String),
    /// Bad input (exit 2).
    Usage(String),
    /// Memory cap or file system (exit 3).
    Resource(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource(_) | Error::Io { .. } => Failure::Resource(e.to_string()),
            Error::Convergence { .. } | Error::Numerical(_) | Error::NotPauliString(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let merged = match config::merge_config(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let cli = Cli::parse_from(merged);
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
