use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use jsr_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let result = jsr_cli::run(&cli, &mut out, &mut err);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = writeln!(err, "jsr: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
