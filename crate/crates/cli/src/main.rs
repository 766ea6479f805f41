mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use dicke_core::DickeError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] DickeError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn run(cli: args::Cli) -> Result<(), CliError> {
    let cfg = config::resolve(cli.command, cli.common)?;
    let outcome = commands::run(&cfg)?;
    match (outcome.summary, cfg.format_explicit) {
        // report commands print text unless data was asked for
        (Some(text), false) => println!("{text}"),
        (summary, _) => {
            output::emit(cfg.command, &outcome.artifact, cfg.format, cfg.output.as_deref())?;
            if let Some(text) = summary {
                // keep stdout parseable when it carries the data
                if cfg.output.is_some() {
                    println!("{text}");
                } else {
                    eprintln!("{text}");
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and prints help when no args are given
    let cli = args::Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        // e.g. piped into `head`
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
