//! Command-line front end for `jsr-core`.
//!
//! Exit codes: 0 success, 2 unreadable or invalid input, 3 enumeration
//! budget exhausted, 4 verification failure, 1 anything else.

pub mod args;
pub mod bench;
pub mod commands;
pub mod error;
pub mod input;
pub mod report;

use std::io::Write;

use args::{Cli, Command};
pub use error::CliError;

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Certify { file, n, common } => commands::cmd_certify(file, *n as usize, common, out),
        Command::Sweep { file, n_max, common } => commands::cmd_sweep(file, *n_max as usize, common, out, err),
        Command::Verify {
            file,
            n_max,
            k_max,
            slack,
            common,
        } => commands::cmd_verify(file, *n_max as usize, *k_max, *slack, common, out),
        Command::Bench {
            seed,
            dims,
            r,
            size,
            n_max,
            common,
        } => bench::cmd_bench(*seed, dims, *r as usize, *size, *n_max as usize, common, out),
    }
}
