use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use unravel_cli::{exit_status, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::new("arguments", e.kind().to_string());
            eprintln!("{}", err.to_json());
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(rows) => {
            let _ = out.flush();
            ExitCode::from(exit_status(&rows) as u8)
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("{}", e.to_json());
            ExitCode::from(2)
        }
    }
}
