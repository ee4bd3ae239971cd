mod args;
mod output;
mod run;
mod verify;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use output::{emit_csv, emit_json, Envelope, RunConfig, SCHEMA};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(hurwitz_core::Error),
}

impl From<hurwitz_core::Error> for CliError {
    fn from(e: hurwitz_core::Error) -> Self {
        if e.is_domain_error() {
            CliError::Domain(e)
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl CliError {
    fn exit(&self) -> ExitCode {
        match self {
            CliError::Usage(m) => {
                eprintln!("error: {m}");
                ExitCode::from(1)
            }
            CliError::Domain(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => e.exit(),
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let cache = run::open_cache(cli.cache.as_deref())?;

    if let Command::Verify(v) = &cli.command {
        let text = std::fs::read_to_string(&v.report)
            .map_err(|e| CliError::Usage(format!("{}: {e}", v.report.display())))?;
        let env: Envelope = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", v.report.display())))?;
        return finish_verify(&cli, &env, &cache);
    }

    let config = RunConfig::new(&cli.command, cli.seed, cli.threads, cli.cache.clone());
    let out = run::run(&cli.command, &cache)?;
    cache.flush()?;
    let env = Envelope { schema: SCHEMA, config, result: out.result };
    if let Some(p) = &cli.csv {
        match &out.csv {
            Some(t) => emit_csv(t, p)?,
            None => return Err(CliError::Usage(format!("--csv: `{}` has no row output", cli.command.name()))),
        }
    }
    if cli.verify {
        let rep = verify::verify(&env, &cache)?;
        emit_json(&env, cli.output.as_deref())?;
        eprintln!("verify: {} of {} rows rechecked, {} mismatches", rep.rows_checked, rep.rows_total, rep.mismatches.len());
        if !rep.ok {
            return Ok(ExitCode::from(2));
        }
    } else {
        emit_json(&env, cli.output.as_deref())?;
    }
    if let Some(msg) = out.failure {
        eprintln!("halted: {msg}");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn finish_verify(cli: &Cli, env: &Envelope, cache: &hurwitz_core::FactorCache) -> Result<ExitCode, CliError> {
    let rep = verify::verify(env, cache)?;
    let config = RunConfig {
        command: "verify".into(),
        args: json!({ "report_command": env.config.command, "report_seed": env.config.seed }),
        seed: cli.seed,
        threads: cli.threads,
        cache: cli.cache.clone(),
    };
    let ok = rep.ok;
    let out = Envelope { schema: SCHEMA, config, result: run::to_value(&rep) };
    emit_json(&out, cli.output.as_deref())?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}
