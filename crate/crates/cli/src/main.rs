//! `subent` command-line front end.

mod args;
mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use chrono::Utc;
use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use commands::{Context, Outcome};
use config::ConfigFile;
use error::CliError;
use output::{render, Manifest};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(violations) if violations.is_empty() => ExitCode::SUCCESS,
        Ok(violations) => {
            for v in violations {
                eprintln!("violation: {v}");
            }
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: &Cli) -> Result<Vec<String>, CliError> {
    let config = match &cli.global.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = config.layer(cli.global.format, "format")?.unwrap_or(Format::Json);
    let out_path = config.layer(cli.global.out.clone(), "out")?;
    let workers = config.layer(cli.global.workers, "workers")?;
    if workers == Some(0) {
        return Err(CliError::Usage("--workers must be positive".into()));
    }
    let ctx = Context { config, workers };

    let started = Utc::now();
    let outcome: Outcome = match &cli.command {
        Command::Formula(a) => commands::formula(a, &ctx)?,
        Command::Estimate(a) => commands::estimate(a, &ctx)?,
        Command::Concentration(a) => commands::concentration(a, &ctx)?,
        Command::Identities(a) => commands::identities(a, &ctx)?,
        Command::Entangle(a) => commands::entangle(a, &ctx)?,
    };
    let manifest = Manifest {
        command: cli.command.name().to_string(),
        parameters: outcome.parameters,
        seed: outcome.seed,
        chunk: outcome.chunk,
        started,
        finished: Utc::now(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let text = render(format, &manifest, &outcome.records);
    match out_path {
        Some(path) => std::fs::write(&path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(outcome.violations)
}
