mod args;
mod exec;
mod manifest;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{Context as _, Result};
use clap::Parser;
use serde_json::Value;

use args::{Cli, Command};
use exec::{execute, Context};

const DEFAULT_TOL: f64 = 1e-10;

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Command::Run(r) = &cli.command {
        let outcome = manifest::run(&r.manifest, cli.seed, cli.tol)?;
        let out = cli.out.or(outcome.out);
        emit(&Value::Array(outcome.records), out.as_deref())?;
        return Ok(outcome.violation);
    }
    let ctx = Context {
        seed: cli.seed,
        require_seed: false,
        tol: cli.tol.unwrap_or(DEFAULT_TOL),
        base: ".".into(),
    };
    let output = execute(&cli.command, &ctx)?;
    emit(&output.standalone()?, cli.out.as_deref())?;
    Ok(output.has_guaranteed_violation())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
