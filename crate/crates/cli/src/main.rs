//! Command line front end: compute composed region bounds, compare the
//! histogram families, print layer matrices and join tables, and drive
//! the exact oracles from scripts.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod files;
mod output;

use commands::Context;
use output::Format;

/// How a run can go wrong, mapped onto exit codes.
pub enum Failure {
    /// Malformed input: exit 2.
    Usage(String),
    /// Well-formed input outside a supported domain, or a policy
    /// refusal: exit 3.
    Domain(String),
    /// Checks ran and this many failed: exit 1.
    Checks(usize),
}

impl From<regionbound_core::Error> for Failure {
    fn from(e: regionbound_core::Error) -> Self {
        use regionbound_core::Error;
        match e {
            Error::ArchitectureFormat(_)
            | Error::SignValue { .. }
            | Error::LayerShape { .. }
            | Error::PartitionShape(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

pub type CmdResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "regionbound",
    version,
    about = "Exact upper bounds on the affine regions of ReLU networks"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized commands; the REGIONBOUND_SEED environment
    /// variable is the fallback, then 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for counterexample artifacts.
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Composed upper bound for one architecture and family.
    Bound {
        /// Architecture as "n0xn1x...xnL", input dimension first.
        #[arg(long)]
        arch: String,
        /// Histogram family: hat, tilde, bar, star or star-conjecture.
        #[arg(long)]
        family: String,
        /// Accept families that rest on the planar conjecture.
        #[arg(long)]
        allow_conjecture: bool,
    },
    /// Every family side by side on one architecture.
    Compare {
        /// Architecture as "n0xn1x...xnL", input dimension first.
        #[arg(long)]
        arch: String,
    },
    /// Run check suites and report; exits 1 if anything fails.
    Verify {
        /// One of star6, matrices6, tau1, conjecture, recursion,
        /// chain, paths, soundness; all of them when omitted.
        #[arg(long)]
        suite: Option<String>,
        /// Width override for the width-capped suites.
        #[arg(long)]
        p1: Option<usize>,
        /// Sample count override for the randomized suites.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// What is known about the maximal activation histograms.
    Tau {
        /// Input dimension; rows 1..=6 when omitted.
        #[arg(long)]
        p0: Option<usize>,
        /// Number of neurons; columns 1..=6 when omitted.
        #[arg(long)]
        p1: Option<usize>,
    },
    /// Layer matrix of a family at one width.
    Matrix {
        /// Histogram family: hat, tilde, bar, star or star-conjecture.
        #[arg(long)]
        family: String,
        /// Layer width.
        #[arg(long, default_value_t = 6)]
        p1: usize,
    },
    /// Direct access to the exact enumeration oracles.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustive join over every sign choice on a line.
    Tau1 {
        /// Number of neurons.
        #[arg(long)]
        p1: usize,
    },
    /// Histogram of one sign sequence, written like "++-".
    Sigma {
        /// Signs, one '+' or '-' per neuron.
        pattern: String,
    },
    /// Cells of a plane arrangement, with sign patterns and witnesses.
    Cells {
        /// Number of lines to sample when no file is given.
        #[arg(long)]
        p1: Option<usize>,
        /// Read the arrangement from a JSON file instead of sampling.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Use the tangent construction instead of sampling.
        #[arg(long)]
        hot_center: bool,
    },
    /// Activation histogram of a plane arrangement.
    Histogram {
        /// Number of lines to sample when no file is given.
        #[arg(long)]
        p1: Option<usize>,
        /// Read the arrangement from a JSON file instead of sampling.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Use the tangent construction instead of sampling.
        #[arg(long)]
        hot_center: bool,
    },
    /// Seeded search for a histogram escaping the planar conjecture.
    SearchTau2 {
        /// Number of lines.
        #[arg(long)]
        p1: usize,
        /// Arrangements to sample.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Exact region count of a rational net with one input.
    CountNet {
        /// Read the net from a JSON file.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Sample a random net with this shape instead.
        #[arg(long)]
        arch: Option<String>,
    },
    /// Sampled lower-bound histogram for a block of layers.
    Subnet {
        /// Block widths as "n1xn2x...".
        #[arg(long)]
        topology: String,
        /// Input dimension of the block.
        #[arg(long, default_value_t = 1)]
        p0: usize,
        /// Networks or arrangements to sample.
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

fn main() -> ExitCode {
    // Rust ignores SIGPIPE at startup, so writing into a closed pipe
    // (`regionbound ... | head`) would panic; restore the default
    // disposition (13 = SIGPIPE, 0 = SIG_DFL) and die quietly instead.
    #[cfg(unix)]
    unsafe {
        extern "C" {
            fn signal(signum: i32, handler: usize) -> usize;
        }
        signal(13, 0);
    }
    let cli = Cli::parse();
    let seed = match cli.seed {
        Some(seed) => seed,
        None => match std::env::var("REGIONBOUND_SEED") {
            Ok(text) => match text.parse() {
                Ok(seed) => seed,
                Err(_) => {
                    eprintln!(
                        "error: REGIONBOUND_SEED must be a 64-bit unsigned integer, got {text:?}"
                    );
                    return ExitCode::from(2);
                }
            },
            Err(_) => 0,
        },
    };
    let ctx = Context { format: cli.format, seed, out_dir: cli.out_dir };
    let result = match cli.command {
        Command::Bound { arch, family, allow_conjecture } => {
            commands::bound::run(&ctx, &arch, &family, allow_conjecture)
        }
        Command::Compare { arch } => commands::compare::run(&ctx, &arch),
        Command::Verify { suite, p1, trials } => {
            commands::verify::run(&ctx, suite.as_deref(), p1, trials)
        }
        Command::Tau { p0, p1 } => commands::tau::run(&ctx, p0, p1),
        Command::Matrix { family, p1 } => commands::matrix::run(&ctx, &family, p1),
        Command::Oracle(cmd) => match cmd {
            OracleCommand::Tau1 { p1 } => commands::oracle::tau1(&ctx, p1),
            OracleCommand::Sigma { pattern } => commands::oracle::sigma(&ctx, &pattern),
            OracleCommand::Cells { p1, file, hot_center } => {
                commands::oracle::cells(&ctx, p1, file.as_deref(), hot_center)
            }
            OracleCommand::Histogram { p1, file, hot_center } => {
                commands::oracle::histogram(&ctx, p1, file.as_deref(), hot_center)
            }
            OracleCommand::SearchTau2 { p1, trials } => {
                commands::oracle::search(&ctx, p1, trials)
            }
            OracleCommand::CountNet { file, arch } => {
                commands::oracle::count_net(&ctx, file.as_deref(), arch.as_deref())
            }
            OracleCommand::Subnet { topology, p0, trials } => {
                commands::oracle::subnet(&ctx, &topology, p0, trials)
            }
        },
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(failed)) => {
            eprintln!("error: {failed} check(s) failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(3)
        }
    }
}
