//! Key/value configuration files.
//!
//! One `key = value` pair per line, `#` starts a comment. The optional key
//! `command` names the subcommand; every other key is the long name of a flag
//! (underscores and hyphens are interchangeable). File entries are turned into
//! `--key=value` arguments placed before the command-line flags, so flags on
//! the command line win and unknown keys are rejected by the argument parser.

use std::ffi::OsString;

use crate::error::CliError;

const COMMANDS: [&str; 8] =
    ["nc-static", "nc-protocol", "fsc-closed", "geodesic", "separatrix-scan", "fit", "qgt-check", "ricci"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub entries: Vec<(String, String)>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile, CliError> {
    let mut out = ConfigFile::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("line {}: expected `key = value`", i + 1), None))?;
        let key = k.trim().replace('_', "-");
        let value = v.trim().trim_matches('"').to_string();
        if key.is_empty() || key.starts_with('-') {
            return Err(CliError::config(format!("line {}: invalid key `{}`", i + 1, k.trim()), None));
        }
        match key.as_str() {
            "command" => out.command = Some(value),
            "config" => return Err(CliError::config("configuration files cannot include others", Some("config"))),
            _ => {
                if out.entries.iter().any(|(e, _)| *e == key) {
                    return Err(CliError::config(format!("duplicate key `{key}`"), Some(&key)));
                }
                out.entries.push((key, value));
            }
        }
    }
    Ok(out)
}

fn find_config(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Index of the subcommand token. Only known names count, so flag values
/// placed before the subcommand are never mistaken for it.
fn command_index(args: &[String]) -> Option<usize> {
    (1..args.len()).find(|&i| COMMANDS.contains(&args[i].as_str()) && args[i - 1] != "--config")
}

/// Merges the configuration file named by `--config` (if any) into `argv`.
///
/// The result is `prog command <file flags> <command-line flags>`.
pub fn expand_args(argv: impl IntoIterator<Item = OsString>) -> Result<Vec<String>, CliError> {
    let args: Vec<String> = argv
        .into_iter()
        .map(|a| a.into_string().map_err(|_| CliError::config("arguments must be valid UTF-8", None)))
        .collect::<Result<_, _>>()?;
    let Some(path) = find_config(&args) else {
        return Ok(args);
    };
    let text =
        std::fs::read_to_string(&path).map_err(|e| CliError::io(format!("cannot read {path}: {e}"), Some("config")))?;
    let file = parse_config(&text)?;
    let prog = args.first().cloned().unwrap_or_else(|| "lmgc".into());
    let (command, before, after) = match command_index(&args) {
        Some(i) => {
            if let Some(c) = &file.command {
                if *c != args[i] {
                    return Err(CliError::config(
                        format!("command `{}` conflicts with `{c}` in {path}", args[i]),
                        Some("command"),
                    ));
                }
            }
            (args[i].clone(), &args[1..i], &args[i + 1..])
        }
        None => {
            let c = file.command.clone().ok_or_else(|| {
                CliError::config("no command given on the command line or in the file", Some("command"))
            })?;
            (c, &args[1..], &args[args.len()..])
        }
    };
    let mut out = vec![prog, command];
    out.extend(file.entries.iter().map(|(k, v)| format!("--{k}={v}")));
    out.extend(before.iter().cloned());
    out.extend(after.iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_pairs_and_comments() {
        let c = parse_config("# sweep\ncommand = fit\ninput = scan.csv  # trailing\nfit_window=1e-5:1e-2\n\n").unwrap();
        assert_eq!(c.command.as_deref(), Some("fit"));
        assert_eq!(c.entries, vec![("input".into(), "scan.csv".into()), ("fit-window".into(), "1e-5:1e-2".into())]);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert_eq!(parse_config("gamma 0.1").unwrap_err().kind, "ConfigError");
        assert_eq!(parse_config("a = 1\na = 2").unwrap_err().parameter.as_deref(), Some("a"));
        assert!(parse_config("config = other.cfg").is_err());
    }

    #[test]
    fn passes_through_without_config() {
        let a = expand_args(os(&["lmgc", "ricci", "--c1", "1"])).unwrap();
        assert_eq!(a, vec!["lmgc", "ricci", "--c1", "1"]);
    }

    #[test]
    fn file_flags_precede_command_line_flags() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.cfg");
        std::fs::write(&p, "command = nc-protocol\ngamma = 0.2\ngrid = 50\n").unwrap();
        let ps = p.to_str().unwrap();
        let a = expand_args(os(&["lmgc", "--config", ps, "--grid", "10"])).unwrap();
        assert_eq!(a, vec!["lmgc", "nc-protocol", "--gamma=0.2", "--grid=50", "--config", ps, "--grid", "10"]);
        let a = expand_args(os(&["lmgc", "--rtol", "1e-8", "nc-protocol", "--config", ps])).unwrap();
        assert_eq!(a[..4], ["lmgc", "nc-protocol", "--gamma=0.2", "--grid=50"]);
        assert_eq!(a[4..6], ["--rtol", "1e-8"]);
        let e = expand_args(os(&["lmgc", "fit", "--config", ps])).unwrap_err();
        assert_eq!(e.parameter.as_deref(), Some("command"));
    }
}
