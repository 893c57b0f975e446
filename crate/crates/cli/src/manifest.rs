//! `{"seed": 7, "tol": 1e-10, "out": "report.json", "commands": [[...], ...]}`
//!
//! Each command is an argument vector for the regular command line. Commands
//! run in order and their records are concatenated into one array. Relative
//! paths, including `out`, are resolved against the manifest's directory.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use clap::Parser;
use serde::Deserialize;
use serde_json::Value;

use crate::args::{Cli, Command};
use crate::exec::{execute, Context};
use crate::DEFAULT_TOL;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunManifest {
    seed: Option<u64>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    #[serde(default)]
    commands: Vec<Vec<String>>,
}

pub struct Outcome {
    pub records: Vec<Value>,
    pub violation: bool,
    pub out: Option<PathBuf>,
}

/// Flags on the `run` invocation take precedence over the manifest's.
pub fn run(path: &Path, seed: Option<u64>, tol: Option<f64>) -> Result<Outcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let manifest: RunManifest =
        serde_json::from_str(&text).with_context(|| format!("malformed manifest {}", path.display()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let base = if base.as_os_str().is_empty() { PathBuf::from(".") } else { base };
    let seed = seed.or(manifest.seed);
    let tol = tol.or(manifest.tol).unwrap_or(DEFAULT_TOL);
    let mut records = Vec::new();
    let mut violation = false;
    for (i, argv) in manifest.commands.iter().enumerate() {
        let cli = Cli::try_parse_from(std::iter::once("logcap".to_string()).chain(argv.iter().cloned()))
            .map_err(|e| anyhow::anyhow!("command {i}: {}", e.to_string().trim_end()))?;
        if matches!(cli.command, Command::Run(_)) {
            bail!("command {i}: run cannot be nested inside a manifest");
        }
        let ctx = Context {
            seed: cli.seed.or(seed),
            require_seed: true,
            tol: cli.tol.unwrap_or(tol),
            base: base.clone(),
        };
        let output = execute(&cli.command, &ctx).with_context(|| format!("command {i} ({})", argv.join(" ")))?;
        violation |= output.has_guaranteed_violation();
        records.extend(output.records()?);
    }
    Ok(Outcome {
        records,
        violation,
        out: manifest.out.map(|o| if o.is_absolute() { o } else { base.join(o) }),
    })
}
