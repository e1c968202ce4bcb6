//! `calibra` command-line front end.

mod args;
mod commands;
mod io;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::io::{CliError, CliResult, Inputs};

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("CALIBRA_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("CALIBRA_THREADS must be a positive integer, got `{raw}`")))?;
    if threads == 0 {
        return Err(CliError::Input("CALIBRA_THREADS must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Input(format!("cannot configure thread pool: {e}")))
}

fn execute(cli: &Cli) -> CliResult<()> {
    configure_threads()?;
    let mut inputs = Inputs::default();
    let report = commands::run(&cli.command, &cli.common, &mut inputs)?;
    let text = report.render(cli.common.format)?;
    match &cli.common.out {
        Some(out) => {
            let all = io::to_value(cli)?;
            let command = all["command"]["command"].as_str().unwrap_or("unknown").to_string();
            io::persist(out, &text, &command, cli.common.seed, io::parameters(&all), inputs.digest())
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
