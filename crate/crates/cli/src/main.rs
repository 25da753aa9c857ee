use std::io::{self, IsTerminal};
use std::process::ExitCode;

use clap::Parser;
use fgc_cli::{run, Cli, Io};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let color = stdout.is_terminal() && std::env::var_os("NO_COLOR").is_none();
    let mut out = stdout.lock();
    let mut err = io::stderr().lock();
    let mut term = Io {
        out: &mut out,
        err: &mut err,
        color,
    };
    match run(&cli, &mut term) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.exit_code();
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
