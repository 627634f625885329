use std::process::ExitCode;

use clap::Parser;
use susyqm_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|mut outcome| {
        outcome.manifest.timestamp = chrono::Utc::now().to_rfc3339();
        outcome.emit(cli.global.out.as_deref(), cli.global.format)?;
        Ok(outcome.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
