//! Command-line front end for `tailbound`: reproduces comparison tables and
//! curves, answers single bound queries and runs seeded verification.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod parse;

use clap::{Parser, Subcommand};

pub use commands::Output;
pub use config::{Flags, RunConfig};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "tailbound", version, about = "Markov, moment and Chernoff tail bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tail, enhanced and traditional bound per threshold (CSV)
    Table(Flags),
    /// Curve data for plotting tail and enhanced Markov bound
    Sweep(Flags),
    /// A single bound query
    Bound(Flags),
    /// Monte Carlo or sample-file check of the empirical sandwich
    Verify(Flags),
}

impl Command {
    fn flags(&self) -> &Flags {
        match self {
            Command::Table(f) | Command::Sweep(f) | Command::Bound(f) | Command::Verify(f) => f,
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = RunConfig::from_flags(cli.command.flags())?;
    match cli.command {
        Command::Table(_) => commands::cmd_table(&cfg),
        Command::Sweep(_) => commands::cmd_sweep(&cfg),
        Command::Bound(_) => commands::cmd_bound(&cfg),
        Command::Verify(_) => commands::cmd_verify(&cfg),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Result<Output, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::usage(e.to_string()))?;
    run(&cli)
}
