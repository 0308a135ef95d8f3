mod args;
mod commands;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::{CliError, Outcome};

fn render(outcome: &Outcome, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_vec_pretty(&outcome.json).map_err(|e| CliError::Internal(e.to_string()))?;
            s.push(b'\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &outcome.table {
                w.write_record(row).map_err(|e| CliError::Internal(e.to_string()))?;
            }
            w.into_inner().map_err(|e| CliError::Internal(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = commands::run(&cli.command).and_then(|o| render(&o, cli.output.format).map(|b| (o, b)));
    let (outcome, bytes) = match result {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                CliError::Input(_) => 2,
                CliError::Internal(_) => 1,
            });
        }
    };
    let written = match &cli.output.out {
        Some(path) => fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if cli.output.strict && outcome.hypothesis_failed {
        eprintln!("hypothesis check failed");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
