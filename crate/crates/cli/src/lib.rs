//! Command-line front end: scenario files, output formats and subcommands.

pub mod args;
pub mod commands;
pub mod output;
pub mod scenario;
pub mod svg;

pub use args::{Cli, Command};
pub use commands::{CliError, Io};

/// Runs one parsed invocation.
pub fn run(cli: &Cli, io: &mut Io<'_>) -> Result<(), CliError> {
    match &cli.command {
        Command::Spectrum(a) => commands::cmd_spectrum(a, io),
        Command::Trapping(a) => commands::cmd_trapping(a, io),
        Command::Sweep(a) => commands::cmd_sweep(a, io),
        Command::Validate(a) => commands::cmd_validate(a, io),
    }
}
