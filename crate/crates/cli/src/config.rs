//! Flat `key=value` config files. Keys mirror long flag names without the
//! leading dashes; flags given on the command line win.

use std::ffi::OsString;

use crate::args::SUBCOMMANDS;
use crate::error::{CliError, CliResult};

const GLOBAL_VALUE_FLAGS: [&str; 3] = ["--order", "--out", "--config"];

/// Parses config text into ordered `(key, value)` pairs.
pub fn parse_config(text: &str) -> CliResult<Vec<(String, String)>> {
    let mut entries: Vec<(String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key=value, got `{line}`", i + 1))
        })?;
        let key = key.trim().trim_start_matches("--").to_string();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(CliError::Usage(format!("config line {}: bad key `{key}`", i + 1)));
        }
        if key == "config" {
            return Err(CliError::Usage(format!(
                "config line {}: config files cannot include other config files",
                i + 1
            )));
        }
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(CliError::Usage(format!("config line {}: duplicate key `{key}`", i + 1)));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

/// Path given with `--config`, if any.
pub fn config_path(args: &[OsString]) -> CliResult<Option<OsString>> {
    let mut found = None;
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            let v = iter
                .next()
                .ok_or_else(|| CliError::Usage("--config needs a path".into()))?;
            found = Some(v.clone());
        } else if let Some(v) = s.strip_prefix("--config=") {
            found = Some(OsString::from(v));
        }
    }
    Ok(found)
}

fn user_gave(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefix = format!("--{key}=");
    args.iter().any(|a| {
        let s = a.to_string_lossy();
        s == flag || s.starts_with(&prefix)
    })
}

/// Inserts config entries as flags right after the subcommand, skipping
/// keys the user already supplied.
pub fn merge(args: Vec<OsString>, entries: &[(String, String)]) -> Vec<OsString> {
    let mut sub_index = None;
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if GLOBAL_VALUE_FLAGS.contains(&s.as_ref()) {
            i += 2;
            continue;
        }
        if SUBCOMMANDS.contains(&s.as_ref()) {
            sub_index = Some(i);
            break;
        }
        i += 1;
    }
    let Some(at) = sub_index else {
        return args;
    };
    let extra: Vec<OsString> = entries
        .iter()
        .filter(|(k, _)| !user_gave(&args, k))
        .flat_map(|(k, v)| [OsString::from(format!("--{k}")), OsString::from(v)])
        .collect();
    let mut out = args[..=at].to_vec();
    out.extend(extra);
    out.extend_from_slice(&args[at + 1..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn parses_and_rejects() {
        let e = parse_config("# c\n\norder = 64\n--theta=pi/3\n").unwrap();
        assert_eq!(e, vec![("order".into(), "64".into()), ("theta".into(), "pi/3".into())]);
        assert!(parse_config("order 64").is_err());
        assert!(parse_config("a=1\na=2").is_err());
        assert!(parse_config("config=x").is_err());
    }

    #[test]
    fn flags_win_over_config() {
        let args = os(&["shearconv", "--order", "64", "build", "--a", "0.2"]);
        let entries = vec![
            ("a".to_string(), "0.5".to_string()),
            ("family".to_string(), "half-plane-fa".to_string()),
            ("order".to_string(), "8".to_string()),
        ];
        let merged = merge(args, &entries);
        assert_eq!(
            merged,
            os(&["shearconv", "--order", "64", "build", "--family", "half-plane-fa", "--a", "0.2"])
        );
    }
}
