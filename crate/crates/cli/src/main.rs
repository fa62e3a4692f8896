//! `deltoid`: experiments on deltoid polynomials and momentum power
//! iterations. Writes JSON rasters and CSV traces for plotting.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, MatrixKind, MatrixSpec, MethodName};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "deltoid", version, about = "Deltoid polynomial and momentum power iteration experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rasterize |P_n| over [-1, 1]^2; one JSON file per degree.
    Region(RegionArgs),
    /// Expansion coefficients beta_k of z^n as CSV.
    Coeffs(CoeffsArgs),
    /// Truncated-expansion error against the 2 exp(-t^2/7) bound as CSV.
    Approx(ApproxArgs),
    /// Per-iteration traces of power-type methods as long-format CSV.
    Converge(ConvergeArgs),
    /// Write a matrix in the sparse text format.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
struct RegionArgs {
    /// Degrees to rasterize.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [6, 12, 24, 96])]
    ns: Vec<usize>,
    /// Cells per side.
    #[arg(long, default_value_t = 512)]
    resolution: usize,
    /// Directory for the region_n{n}.json files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Args)]
struct CoeffsArgs {
    #[arg(long)]
    n: usize,
    /// Output file; stdout if omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    #[arg(long = "n", value_delimiter = ',', default_values_t = [16, 64, 256])]
    ns: Vec<usize>,
    #[arg(long = "t", value_delimiter = ',', default_values_t = [1.0, 2.0, 3.0])]
    ts: Vec<f64>,
    /// Region sample points: half on the boundary, half inside.
    #[arg(long, default_value_t = 500)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MatrixArgs {
    /// toy, barbell, or file:<path> in the sparse text format.
    #[arg(long, default_value = "toy")]
    matrix: MatrixKind,
    /// Barbell block size.
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Barbell edge probability.
    #[arg(long, default_value_t = 1.0 / 125.0)]
    p: f64,
    /// Barbell generator seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl MatrixArgs {
    fn spec(&self) -> Result<MatrixSpec, CliError> {
        MatrixSpec::new(self.matrix.clone(), self.n, self.p, self.seed)
    }
}

#[derive(Debug, Args)]
struct ConvergeArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Comma-separated subset of power, cheb1, deltoid, deltoid-dyn.
    #[arg(long, value_delimiter = ',', required = true)]
    methods: Vec<MethodName>,
    /// Iterations per method.
    #[arg(short = 'N', long, default_value_t = 1000)]
    iterations: usize,
    /// Fixed momentum parameter for cheb1 and deltoid.
    #[arg(long)]
    beta: Option<f64>,
    /// Derive beta from lambda2: 4 lambda2^3/27 for deltoid, lambda2^2/4 for cheb1.
    #[arg(long)]
    beta_oracle: bool,
    /// Second eigenvalue for --beta-oracle (toy default 1).
    #[arg(long)]
    lambda2: Option<f64>,
    /// Seed of the start vector shared by all methods.
    #[arg(long, default_value_t = 0)]
    start_seed: u64,
    /// Relative residual certifying the reference eigenvector.
    #[arg(long, default_value_t = 1e-13)]
    reference_tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    reference_max_iters: usize,
    /// CSV output; stdout if omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Metadata JSON; defaults to <out>.meta.json when --out is given.
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ExportArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Region(args) => {
            for path in commands::cmd_region(&args.ns, args.resolution, &args.out_dir)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Coeffs(args) => commands::cmd_coeffs(args.n, args.out.as_deref()),
        Command::Approx(args) => {
            commands::cmd_approx(&args.ns, &args.ts, args.samples, args.seed, args.out.as_deref())
        }
        Command::Converge(args) => {
            let config = ExperimentConfig {
                matrix: args.matrix.spec()?,
                methods: args.methods,
                iterations: args.iterations,
                beta: args.beta,
                beta_oracle: args.beta_oracle,
                lambda2: args.lambda2,
                start_seed: args.start_seed,
                reference_tol: args.reference_tol,
                reference_max_iters: args.reference_max_iters,
                out: args.out,
            };
            for path in commands::cmd_converge(&config, args.meta.as_deref())? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Export(args) => commands::cmd_export(&args.matrix.spec()?, args.out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("deltoid: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
