//! `key=value` config files. Entries become flags placed directly after the
//! subcommand name, so explicit flags later on the command line win.

use std::ffi::OsString;
use std::path::Path;

use super::{CliError, CliResult};

const GLOBAL_WITH_VALUE: [&str; 3] = ["--config", "--out", "--format"];

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut it = argv.iter().skip(1);
    let mut found = None;
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            found = it.next().cloned();
        } else if let Some(p) = s.strip_prefix("--config=") {
            found = Some(OsString::from(p));
        }
    }
    found
}

/// Index of the subcommand name in `argv`, skipping global options.
fn subcommand_index(cmd: &clap::Command, argv: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < argv.len() {
        let s = argv[i].to_string_lossy();
        if GLOBAL_WITH_VALUE.contains(&s.as_ref()) {
            i += 2;
            continue;
        }
        if cmd.find_subcommand(s.as_ref()).is_some() {
            return Some(i);
        }
        if !s.starts_with('-') {
            return None;
        }
        i += 1;
    }
    None
}

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str, origin: &Path) -> CliResult<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{}:{}: expected key=value, got {line:?}", origin.display(), n + 1))
        })?;
        out.push((k.trim().replace('_', "-"), v.trim().to_string()));
    }
    Ok(out)
}

pub fn splice_config(cmd: &clap::Command, argv: Vec<OsString>) -> CliResult<Vec<OsString>> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let path = Path::new(&path).to_path_buf();
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let entries = parse_config(&text, &path)?;
    let Some(idx) = subcommand_index(cmd, &argv) else {
        return Ok(argv);
    };
    let name = argv[idx].to_string_lossy().into_owned();
    let sub = cmd.find_subcommand(&name).expect("index points at a subcommand");
    let known = |key: &str| {
        sub.get_arguments()
            .chain(cmd.get_arguments())
            .any(|a| a.get_long() == Some(key))
    };
    let mut injected = Vec::new();
    for (k, v) in entries {
        if k == "config" {
            continue;
        }
        if known(&k) {
            injected.push(OsString::from(format!("--{k}")));
            injected.push(OsString::from(v));
        } else {
            log::warn!("config key `{k}` is not used by `{name}`; ignored");
        }
    }
    let mut out = argv[..=idx].to_vec();
    out.extend(injected);
    out.extend_from_slice(&argv[idx + 1..]);
    Ok(out)
}
