use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use strobe_cli::{run, Cli, ExperimentConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = ExperimentConfig::from_cli(&cli).and_then(|cfg| run(&cfg, &mut out));
    let _ = out.flush();
    match result {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("strobe: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
