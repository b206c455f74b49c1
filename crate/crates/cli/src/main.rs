//! `aea`: GCDs, half-GCD reports and traces, benchmarks, and a self-test.

mod bench;
mod input;
mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use aea_core::LimbBase;
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::input::BaseArg;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invariant breach: {0}")]
    Invariant(String),
    #[error("self-test failed: {0}")]
    Selftest(String),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Selftest(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Invariant(_) => 3,
            CliError::Io(_) => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "aea", version, about = "Half-GCD based integer GCD toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Two nonnegative integers, decimal or 0x-prefixed hex.
    #[arg(value_name = "INT", num_args = 0..=2)]
    pub values: Vec<String>,
    /// Read the two integers from a file instead.
    #[arg(long, value_name = "PATH")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BaseOpts {
    /// Limb base, `binary:W` or `decimal:d`.
    #[arg(long)]
    pub base: Option<BaseArg>,
    /// Default binary word size when --base is absent.
    #[arg(
        long,
        env = "AEA_DEFAULT_WORD",
        default_value_t = 64,
        hide_short_help = true
    )]
    pub word: u32,
}

impl BaseOpts {
    pub fn resolve(&self) -> Result<LimbBase, CliError> {
        match self.base {
            Some(b) => Ok(b.0),
            None => LimbBase::binary(self.word).map_err(|e| CliError::Usage(e.to_string())),
        }
    }
}

#[derive(Debug, Args)]
pub struct HalfArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[command(flatten)]
    pub base: BaseOpts,
    /// Skip the final bounded Euclid squeeze.
    #[arg(long)]
    pub no_squeeze: bool,
    /// Allow operands shorter than 8 words (for small worked examples).
    #[arg(long)]
    pub small: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Greatest common divisor.
    Gcd {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        base: BaseOpts,
        /// Also print x, y with x·u + y·v = g.
        #[arg(long)]
        bezout: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Half-GCD matrix and reduced pair.
    Hgcd {
        #[command(flatten)]
        args: HalfArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Stream the half-GCD trace as JSON lines.
    Trace {
        #[command(flatten)]
        args: HalfArgs,
    },
    /// Time the GCD algorithms on seeded inputs.
    Bench(bench::BenchArgs),
    /// Replay the worked examples and run a reduced oracle suite.
    Selftest(selftest::SelftestArgs),
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gcd {
            pair,
            base,
            bezout,
            format,
        } => report::gcd(&pair, &base, bezout, format),
        Command::Hgcd { args, format } => report::hgcd(&args, format),
        Command::Trace { args } => report::trace(&args),
        Command::Bench(args) => bench::run(&args),
        Command::Selftest(args) => selftest::run(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("aea: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
