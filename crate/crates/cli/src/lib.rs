//! `lmgc`: configuration, dispatch and CSV/JSON emission for `lmgc-core`.
//!
//! [`run`] takes the raw argument list and returns the process exit status.
//! Results go to stdout or `--output`; failures are reported on stderr as a
//! single JSON record `{"error": {"kind", "message", "parameter"}}`.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::error::{ContextKind, ContextValue, ErrorKind};
use clap::Parser;
use serde_json::{Map, Value};

use lmgc_core::ode::Tolerances;

use args::{Cli, Command, Format};
use error::{At, CliError};
use output::{render, Table};

/// Parses, runs and reports. Returns the process exit status.
pub fn run(argv: impl IntoIterator<Item = OsString>) -> u8 {
    match run_inner(argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}

fn clap_error(e: clap::Error) -> CliError {
    let parameter = match e.get(ContextKind::InvalidArg) {
        Some(ContextValue::String(s)) => {
            Some(s.trim_start_matches('-').split(['=', ' ']).next().unwrap_or("").to_string())
        }
        _ => None,
    };
    let message = e.to_string().lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
    CliError { kind: "ConfigError".into(), message, parameter }
}

fn parse(argv: impl IntoIterator<Item = OsString>) -> Result<Option<Cli>, CliError> {
    let args = config::expand_args(argv)?;
    match Cli::try_parse_from(args) {
        Ok(c) => Ok(Some(c)),
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            Ok(None)
        }
        Err(e) if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            eprint!("{e}");
            Err(CliError::config("no command given", Some("command")))
        }
        Err(e) => Err(clap_error(e)),
    }
}

/// The resolved configuration recorded alongside every result.
fn resolved_config(cli: &Cli) -> Map<String, Value> {
    let sub = match &cli.command {
        Command::NcStatic(a) => serde_json::to_value(a),
        Command::NcProtocol(a) => serde_json::to_value(a),
        Command::FscClosed(a) => serde_json::to_value(a),
        Command::Geodesic(a) => serde_json::to_value(a),
        Command::SeparatrixScan(a) => serde_json::to_value(a),
        Command::Fit(a) => serde_json::to_value(a),
        Command::QgtCheck(a) => serde_json::to_value(a),
        Command::Ricci(a) => serde_json::to_value(a),
    };
    let mut m = match sub {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    // tolerances only matter where something is integrated
    if matches!(cli.command, Command::NcProtocol(_) | Command::Geodesic(_) | Command::SeparatrixScan(_)) {
        m.insert("rtol".into(), Value::from(cli.global.rtol));
        m.insert("atol".into(), Value::from(cli.global.atol));
    }
    m
}

fn emit(text: &str, path: Option<&Path>, parameter: &str) -> Result<(), CliError> {
    let res = match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    res.map_err(|m| CliError::io(m, Some(parameter)))
}

fn run_inner(argv: impl IntoIterator<Item = OsString>) -> Result<(), CliError> {
    let Some(cli) = parse(argv)? else {
        return Ok(());
    };
    let g = &cli.global;
    for (v, name) in [(g.rtol, "rtol"), (g.atol, "atol")] {
        if !(1e-14..=1e-3).contains(&v) {
            return Err(CliError::config(format!("{name} = {v} lies outside [1e-14, 1e-3]"), Some(name)));
        }
    }
    let tol = Tolerances::new(g.rtol, g.atol).at("rtol")?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(g.jobs)
        .build()
        .map_err(|e| CliError::config(format!("cannot start {} workers: {e}", g.jobs), Some("jobs")))?;
    let config = resolved_config(&cli);
    let name = cli.command.name();
    let mut aux: Option<(Table, &Path)> = None;
    let table = pool.install(|| -> Result<Table, CliError> {
        match &cli.command {
            Command::NcStatic(a) => commands::nc_static_cmd(a),
            Command::NcProtocol(a) => {
                let (t, states) = commands::nc_protocol_cmd(a, tol)?;
                if let Some(p) = &a.aux_output {
                    aux = Some((commands::aux_table(&states), p.as_path()));
                }
                Ok(t)
            }
            Command::FscClosed(a) => commands::fsc_closed_cmd(a),
            Command::Geodesic(a) => commands::geodesic_cmd(a, tol),
            Command::SeparatrixScan(a) => commands::scan_cmd(a, tol),
            Command::Fit(a) => commands::fit_cmd(a),
            Command::QgtCheck(a) => commands::qgt_cmd(a),
            Command::Ricci(a) => commands::ricci_cmd(a),
        }
    })?;
    let format = g.format.unwrap_or_else(|| table.default_format());
    emit(&render(&table, format, name, &config), g.output.as_deref(), "output")?;
    if let Some((t, p)) = aux {
        emit(&render(&t, Format::Csv, name, &config), Some(p), "aux-output")?;
    }
    Ok(())
}
