//! `qsearch`: seeded batch experiments over the qsearch library.
//!
//! Exit status: 0 on success, 1 for usage or configuration errors, 2 when a
//! run finishes but a checked invariant fails (the report is still written).

mod args;
mod commands;
mod report;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use crate::args::{Cli, Command};

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<qsearch::Error> for Failure {
    fn from(e: qsearch::Error) -> Self {
        match e {
            qsearch::Error::NormDrift(_) | qsearch::Error::NonUnitary(_) => Failure::Invariant(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Invariant(_) => 2,
            _ => 1,
        }
    }
}

fn execute(command: &Command) -> Result<Option<String>, Failure> {
    let outcome = match command {
        Command::Search(a) => commands::search::run(a)?,
        Command::Curve(a) => commands::curve::run(a)?,
        Command::Count(a) => commands::count::run(a)?,
        Command::Amplify(a) => commands::amplify::run(a)?,
        Command::Lowerbound(a) => commands::lowerbound::run(a)?,
    };
    match &command.common().out {
        Some(path) => fs::write(path, &outcome.bytes)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&outcome.bytes)?;
            stdout.flush()?;
        }
    }
    Ok(outcome.violation)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(&cli.command) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(violation)) => {
            eprintln!("qsearch: invariant violated: {violation}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("qsearch: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
