use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tailbound_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.text.as_bytes()).is_err() {
                return ExitCode::FAILURE;
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("tailbound: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
