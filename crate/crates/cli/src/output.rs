use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Command;
use crate::CliError;

pub const SCHEMA: u32 = 1;

/// The resolved run configuration echoed at the top of every report.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    pub args: Value,
    pub seed: u64,
    pub threads: Option<usize>,
    pub cache: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(cmd: &Command, seed: u64, threads: Option<usize>, cache: Option<PathBuf>) -> Self {
        let v = serde_json::to_value(cmd).expect("arguments serialize");
        RunConfig {
            command: cmd.name().to_string(),
            args: v.get("args").cloned().unwrap_or(Value::Null),
            seed,
            threads,
            cache,
        }
    }

    pub fn command(&self) -> Result<Command, CliError> {
        serde_json::from_value(serde_json::json!({ "command": self.command, "args": self.args }))
            .map_err(|e| CliError::Usage(format!("report config: {e}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub schema: u32,
    pub config: RunConfig,
    pub result: Value,
}

pub struct CsvTable {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

/// Writes to a temporary file in the target directory, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_err(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_err(path, e))?;
    tmp.flush().map_err(|e| io_err(path, e))?;
    tmp.persist(path).map_err(|e| io_err(path, e.error))?;
    Ok(())
}

pub fn emit_json(env: &Envelope, path: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(env).expect("report serializes");
    text.push('\n');
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn emit_csv(table: &CsvTable, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header).map_err(|e| io_err(path, e))?;
    for r in &table.rows {
        w.write_record(r).map_err(|e| io_err(path, e))?;
    }
    let bytes = w.into_inner().map_err(|e| io_err(path, e))?;
    write_atomic(path, &bytes)
}
