//! `otto`: single cycles, figure sweeps, the engine comparison table and POVM searches.
//!
//! Exit status: 0 on success, 2 on flag errors, 3 when `--strict` is set and an optimizer
//! run stops on its budget, 1 on any other failure.

mod args;
mod commands;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use error::{CliError, CliResult};

fn emit(cli: &Cli, outcome: &commands::Outcome) -> CliResult<()> {
    let format = cli.opts.format.unwrap_or(outcome.default_format);
    let text = outcome.report.render(format, cli.opts.deterministic);
    match &cli.opts.out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome =
        match commands::run(cli.command, &cli.opts).and_then(|o| emit(&cli, &o).map(|_| o)) {
            Ok(o) => o,
            Err(e) => {
                eprintln!("otto {}: {e}", cli.command.name());
                return ExitCode::from(e.exit_code());
            }
        };
    if let Some(msg) = &outcome.failed_check {
        eprintln!("otto {}: {msg}", cli.command.name());
        return ExitCode::FAILURE;
    }
    if outcome.unconverged > 0 {
        eprintln!(
            "otto {}: {} optimizer run(s) stopped on the evaluation budget",
            cli.command.name(),
            outcome.unconverged
        );
        if cli.opts.strict {
            return ExitCode::from(3);
        }
    }
    ExitCode::SUCCESS
}
