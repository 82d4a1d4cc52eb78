//! Command-line front end for structured evaluation, interpolation, matvecs,
//! solves, transforms, approximations and benchmarks.

mod commands;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use struxform::StruxError;

#[derive(Parser, Debug)]
#[command(name = "struxform", version, about = "Structured-matrix transforms and fast polynomial arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
enum Method {
    Fast,
    TwoLevel,
    Dense,
    ProductTree,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Target accuracy in bits.
    #[arg(long, default_value_t = 24)]
    b: u32,
    #[arg(long, value_enum, default_value_t = Method::Fast)]
    method: Method,
    /// Seed for random instances when inputs are omitted.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Size of a random instance when inputs are omitted.
    #[arg(long)]
    n: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a polynomial at knots.
    Eval {
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long)]
        knots: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Interpolate coefficients from values at knots.
    Interp {
        #[arg(long)]
        values: Option<PathBuf>,
        #[arg(long)]
        knots: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Multiply a structured matrix or a stored approximation by a vector.
    Matvec {
        /// Structured matrix JSON (tagged by "type").
        #[arg(long, alias = "matrix")]
        cauchy: Option<PathBuf>,
        /// Approximation written by `approx`.
        #[arg(long)]
        approx: Option<PathBuf>,
        #[arg(long)]
        x: Option<PathBuf>,
        /// Sector size for the two-level method.
        #[arg(long)]
        h: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Solve a CV system or a Cauchy-like system given by its generator.
    Solve {
        #[arg(long)]
        cauchy: Option<PathBuf>,
        #[arg(long)]
        generator: Option<PathBuf>,
        #[arg(long)]
        rhs: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Map a displacement generator to another structure class.
    Transform {
        #[arg(long)]
        generator: PathBuf,
        /// Target class: T, H, V, VT or C.
        #[arg(long)]
        to: String,
        /// Where to write the length/residual report; standard error when absent.
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Build and serialize the sector approximation of a CV matrix.
    Approx {
        #[arg(long)]
        cauchy: Option<PathBuf>,
        #[arg(long)]
        h: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep sizes and emit a CSV report.
    Bench {
        /// One of eval, interp, matvec, solve.
        #[arg(long, default_value = "matvec")]
        task: String,
        /// Comma-separated sizes.
        #[arg(long = "n", value_delimiter = ',', default_value = "64,128,256")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 16)]
        b: u32,
        #[arg(long, value_enum, default_value_t = Method::Fast)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<StruxError>() {
        Some(e) if e.is_numerical() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
