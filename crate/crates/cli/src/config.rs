//! Flat `key = value` configuration files.
//!
//! Keys are flag names without the leading dashes (`tau-q` or `tau_q`).
//! Blank lines and lines starting with `#` are ignored. A value of `true` or
//! `false` toggles a switch. Flags given on the command line win over the file.

use std::ffi::OsString;
use std::path::Path;

use crate::{CliError, CliResult};

const SWITCHES: &[&str] = &["cross-check", "split"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

pub fn parse(text: &str) -> CliResult<Vec<Entry>> {
    let mut entries = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config line {}: expected key = value",
                no + 1
            )));
        };
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!(
                "config line {}: invalid key '{key}'",
                no + 1
            )));
        }
        entries.push(Entry {
            key,
            value: value.trim().to_string(),
        });
    }
    Ok(entries)
}

pub fn load(path: &Path) -> CliResult<Vec<Entry>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    parse(&text)
}

fn flag_given(argv: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let prefix = format!("--{key}=");
    argv.iter().any(|a| {
        a.to_str()
            .is_some_and(|s| s == long || s.starts_with(&prefix))
    })
}

fn config_path(argv: &[OsString]) -> CliResult<Option<OsString>> {
    let mut found = None;
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let Some(s) = a.to_str() else { continue };
        if s == "--config" {
            match it.next() {
                Some(v) => found = Some(v.clone()),
                None => return Err(CliError::Usage("--config needs a file path".into())),
            }
        } else if let Some(v) = s.strip_prefix("--config=") {
            found = Some(v.into());
        }
    }
    Ok(found)
}

/// Append the entries of the `--config` file, if any, to `argv`, skipping
/// keys already present on the command line.
pub fn merge_config_file(mut argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&argv)? else {
        return Ok(argv);
    };
    let entries = load(Path::new(&path))?;
    let given: Vec<OsString> = argv.clone();
    for Entry { key, value } in entries {
        if flag_given(&given, &key) {
            continue;
        }
        if SWITCHES.contains(&key.as_str()) {
            match value.as_str() {
                "true" => argv.push(format!("--{key}").into()),
                "false" => {}
                v => {
                    return Err(CliError::Usage(format!(
                        "config key {key}: expected true or false, got '{v}'"
                    )))
                }
            }
        } else {
            argv.push(format!("--{key}={value}").into());
        }
    }
    Ok(argv)
}
