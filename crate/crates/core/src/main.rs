use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use symcross::cli::{execute, exit_code, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(outcome.render(cli.json).as_bytes());
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err) as u8)
        }
    }
}
