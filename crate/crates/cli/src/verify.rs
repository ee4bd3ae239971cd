//! Recomputes a 1% random sample (at least one row) of a report.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use hurwitz_core::FactorCache;

use crate::args::Command;
use crate::output::{Envelope, SCHEMA};
use crate::run::{self, algebraic, density_row, density_window, evaluator, factor_row, recompute_cell, to_value};
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub verified_command: String,
    pub rows_total: usize,
    pub rows_checked: usize,
    pub checked: Vec<String>,
    pub mismatches: Vec<String>,
    pub ok: bool,
}

fn rows_under(v: &Value, path: &str) -> Vec<String> {
    match v.pointer(path).and_then(Value::as_array) {
        Some(a) => (0..a.len()).map(|i| format!("{path}/{i}")).collect(),
        None => Vec::new(),
    }
}

fn row_pointers(cmd: &Command, result: &Value) -> Vec<String> {
    match cmd {
        Command::Eval(_) | Command::Decompose(_) | Command::Classify(_) => vec![String::new()],
        Command::FactorIdeals(_) => rows_under(result, "/rows"),
        Command::Density(_) => rows_under(result, "/reports")
            .iter()
            .flat_map(|r| rows_under(result, &format!("{r}/entries")))
            .collect(),
        Command::ConstructPhi(_) => {
            let mut v: Vec<String> = rows_under(result, "/report/stages")
                .iter()
                .flat_map(|s| rows_under(result, &format!("{s}/classes")))
                .collect();
            v.extend(rows_under(result, "/phi_log"));
            v
        }
        Command::Zeros(_) => rows_under(result, "/cells"),
        Command::Verify(_) => Vec::new(),
    }
}

/// The report directory of a row pointer such as `/reports/3/entries/17`.
fn parent(ptr: &str, levels: usize) -> String {
    let parts: Vec<&str> = ptr.split('/').collect();
    parts[..parts.len() - levels].join("/")
}

fn check_row(cmd: &Command, result: &Value, ptr: &str, rerun: &mut Option<Value>, cache: &FactorCache) -> Result<bool, CliError> {
    let old = result
        .pointer(ptr)
        .ok_or_else(|| CliError::Usage(format!("report lacks row {ptr}")))?;
    match cmd {
        Command::FactorIdeals(a) => {
            let alpha = algebraic(&a.minpoly, &a.interval, a.q)?;
            let n = old["n"].as_u64().ok_or_else(|| CliError::Usage(format!("{ptr}: no n")))?;
            Ok(factor_row(&alpha.ideal_factorize_cached(n, cache)?) == *old)
        }
        Command::Density(a) => {
            let alpha = algebraic(&a.minpoly, &a.interval, a.q)?;
            let win = &result.pointer(&parent(ptr, 2)).expect("row has a report")["window"];
            let (n0, b) = (win["N"].as_u64(), win["b"].as_u64());
            let n = old["n"].as_u64();
            let (Some(n0), Some(b), Some(n)) = (n0, b, n) else {
                return Err(CliError::Usage(format!("{ptr}: malformed window")));
            };
            let w = density_window(a, n0, b)?;
            let (e, sound) = density_row(&alpha, &w, n, cache)?;
            Ok(sound && to_value(&e) == *old)
        }
        Command::Zeros(a) => {
            let ev = evaluator(a)?;
            Ok(recompute_cell(ev.as_ref(), old)? == *old)
        }
        _ => {
            if rerun.is_none() {
                *rerun = Some(run::run(cmd, cache)?.result);
            }
            Ok(rerun.as_ref().and_then(|r| r.pointer(ptr)) == Some(old))
        }
    }
}

pub fn verify(env: &Envelope, cache: &FactorCache) -> Result<VerifyReport, CliError> {
    if env.schema != SCHEMA {
        return Err(CliError::Usage(format!("report schema {} not supported", env.schema)));
    }
    let cmd = env.config.command()?;
    let rows = row_pointers(&cmd, &env.result);
    let k = if rows.is_empty() { 0 } else { rows.len().div_ceil(100) };
    let mut rng = ChaCha8Rng::seed_from_u64(env.config.seed);
    let mut picked: Vec<usize> = sample(&mut rng, rows.len(), k).into_vec();
    picked.sort_unstable();
    let mut rerun = None;
    let mut checked = Vec::new();
    let mut mismatches = Vec::new();
    for i in picked {
        let ptr = &rows[i];
        if !check_row(&cmd, &env.result, ptr, &mut rerun, cache)? {
            mismatches.push(ptr.clone());
        }
        checked.push(ptr.clone());
    }
    Ok(VerifyReport {
        verified_command: env.config.command.clone(),
        rows_total: rows.len(),
        rows_checked: checked.len(),
        ok: mismatches.is_empty(),
        checked,
        mismatches,
    })
}
