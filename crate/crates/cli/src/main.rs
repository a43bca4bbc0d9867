mod args;
mod commands;
mod parse;
mod report;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use gaborkit::Error;

use args::Cli;

/// Exit status for failures of the numerics rather than of the input.
const NUMERICAL_FAILURE: u8 = 3;
const VALIDATION_ERROR: u8 = 2;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotAFrame { .. }
        | Error::SingularAtTruncation { .. }
        | Error::NotConverged { .. }
        | Error::UnresolvedSpectrum { .. } => NUMERICAL_FAILURE,
        _ => VALIDATION_ERROR,
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => report::write_atomic(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (report, result) = commands::run(&cli.command, cli.seed);
    let wall = (!cli.deterministic).then(|| start.elapsed().as_secs_f64());
    let code = match &result {
        Ok(()) if report.passed() => 0,
        Ok(()) => NUMERICAL_FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(e)
        }
    };
    if code != VALIDATION_ERROR {
        if let Err(e) = emit(&cli, &report.to_json(wall, result.as_ref().err())) {
            eprintln!("error: cannot write report: {e}");
            return ExitCode::from(VALIDATION_ERROR);
        }
    }
    ExitCode::from(code)
}
