//! `sbchain`: exact chain analysis, the closed-form awakening law, seeded
//! simulation and sequence conversion.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 invalid chain,
//! 4 internal consistency failure.

mod chain_file;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sbchain",
    version,
    about = "Finite Markov chains and the repeated Sleeping Beauty experiment"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvertMode {
    /// Coins (H T) to labeled awakenings (MH MT TU)
    Encode,
    /// Labeled awakenings to observed days (M TU)
    Project,
    /// Observed days back to labeled awakenings
    Decode,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Irreducibility, period, ergodicity and stationary law of a chain
    Analyze {
        /// Chain-spec JSON file, or `sbp` for the built-in awakening chain
        #[arg(long, default_value = "sbp")]
        chain: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// P_{X_n} by matrix recursion and by closed form, with distance to the stationary law
    Exact {
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Seeded Monte Carlo over repeated experiments
    Simulate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of experiments
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        /// Experiments between checkpoints
        #[arg(long, default_value_t = 10_000)]
        stride: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the record here and print a summary to stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Convert between coin, labeled and observed sequences
    Convert {
        #[arg(value_enum)]
        mode: ConvertMode,
        /// Whitespace-separated tokens; read from stdin when absent
        tokens: Vec<String>,
        /// Treat the observed record as ending on an experiment boundary
        #[arg(long)]
        complete: bool,
    },
}

/// Failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }

    pub fn invalid_chain(message: impl ToString) -> Self {
        Failure {
            code: 3,
            message: message.to_string(),
        }
    }

    pub fn internal(message: impl ToString) -> Self {
        Failure {
            code: 4,
            message: message.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let result = match cli.command {
        Command::Analyze { chain, format } => commands::analyze(&chain, format, &mut stdout),
        Command::Exact { n_max, format } => commands::exact(n_max, format, &mut stdout),
        Command::Simulate {
            seed,
            n,
            stride,
            format,
            output,
        } => commands::simulate(seed, n, stride, format, output.as_deref(), &mut stdout),
        Command::Convert {
            mode,
            tokens,
            complete,
        } => commands::convert(mode, &tokens, complete, &mut stdout),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("sbchain: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
