//! `exchkit`: generate, check, verify, sample, and project weighted
//! exchangeable instances from the command line.
//!
//! Exit codes: 0 on success (and all bounds passing where applicable),
//! 1 when a check or verification fails, 2 on input errors.

mod commands;
mod io;

use clap::{Parser, Subcommand};
use commands::VerifyArgs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "exchkit",
    version,
    about = "Exact computations for finite weighted exchangeable sequences",
    after_help = "The EXCHKIT_THREADS environment variable (integer >= 1) caps sweep parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance file
    Gen {
        /// RNG seed; identical flags reproduce the file byte for byte
        #[arg(long)]
        seed: u64,
        /// Alphabet size
        #[arg(long)]
        c: usize,
        /// Sequence length
        #[arg(long)]
        n: usize,
        /// Lower bound on per-coordinate weight ratios, in (0, 1]
        #[arg(long = "r-min", default_value_t = 1.0)]
        r_min: f64,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that an instance file defines a weighted exchangeable law
    Check {
        /// Instance JSON file
        instance: PathBuf,
    },
    /// Evaluate approximation bounds; a sweep of generated instances when
    /// no file is given
    Verify {
        /// Instance JSON file (omit to run the generated sweep)
        instance: Option<PathBuf>,
        /// Prefix lengths, comma separated; all of 1..=n when omitted
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<usize>>,
        /// Master seed for the sweep
        #[arg(long, default_value_t = 0, conflicts_with = "instance")]
        seed: u64,
        /// Number of sweep instances
        #[arg(long, default_value_t = 200, conflicts_with = "instance")]
        instances: usize,
        /// Fix the sweep alphabet size instead of cycling c in {2,3}
        #[arg(long, conflicts_with = "instance")]
        c: Option<usize>,
        /// Fix the sweep length instead of cycling n in 2..=7
        #[arg(long, conflicts_with = "instance")]
        n: Option<usize>,
        /// Fix the sweep ratio floor instead of cycling {1, 0.5, 0.2}
        #[arg(long = "r-min", conflicts_with = "instance")]
        r_min: Option<f64>,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw exact samples from an instance's law and report frequencies
    Sample {
        /// Instance JSON file
        instance: PathBuf,
        /// Number of draws
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best mixture-of-products approximation of a prefix law over a
    /// weight grid, by linear programming
    Project {
        /// Instance JSON file
        instance: PathBuf,
        /// Prefix length
        #[arg(long)]
        k: usize,
        /// Grid resolution (points per simplex direction)
        #[arg(long, default_value_t = 20)]
        grid: usize,
        /// JSON output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// TV decay of prefix approximations along a ratio family (Polya core
    /// with alpha = beta = 1)
    Asymptotics {
        /// Ratio family: constant[:r], one-minus-geometric[:a],
        /// one-minus-poly[:a,p], geometric[:a], harmonic
        #[arg(long)]
        family: String,
        /// Prefix length (at most 3)
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Largest sequence length (at most 10)
        #[arg(long = "n-max", default_value_t = 8)]
        n_max: usize,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn configure_threads() -> Result<(), String> {
    let raw = match std::env::var("EXCHKIT_THREADS") {
        Ok(raw) => raw,
        Err(_) => return Ok(()),
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| format!("EXCHKIT_THREADS must be an integer >= 1, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| format!("thread pool: {e}"))
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Gen { seed, c, n, r_min, out } => {
            commands::cmd_gen(seed, c, n, r_min, out.as_deref())
        }
        Command::Check { instance } => commands::cmd_check(&instance),
        Command::Verify { instance, k, seed, instances, c, n, r_min, out } => {
            commands::cmd_verify(&VerifyArgs {
                instance,
                k_list: k,
                seed,
                instances,
                c,
                n,
                r_min,
                out,
            })
        }
        Command::Sample { instance, samples, seed, out } => {
            commands::cmd_sample(&instance, samples, seed, out.as_deref())
        }
        Command::Project { instance, k, grid, out } => {
            commands::cmd_project(&instance, k, grid, out.as_deref())
        }
        Command::Asymptotics { family, k, n_max, out } => {
            commands::cmd_asymptotics(&family, k, n_max, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = configure_threads() {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
