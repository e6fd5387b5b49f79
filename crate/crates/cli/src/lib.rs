//! Command-line front end: argument parsing, JSON reports and the built-in
//! verification suite.

pub mod args;
pub mod commands;
pub mod report;
pub mod suite;

use std::process::ExitCode;

use clap::Parser;

/// Exit status for a failed mathematical check.
pub const EXIT_PROPERTY_FAILURE: u8 = 1;
/// Exit status for bad arguments, unreadable graphs and exhausted budgets.
pub const EXIT_USAGE: u8 = 2;

pub fn main_with_args<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            if cli.global.json {
                println!("{}", out.report.to_json());
            } else {
                print!("{}", out.text);
            }
            if out.failed {
                ExitCode::from(EXIT_PROPERTY_FAILURE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
