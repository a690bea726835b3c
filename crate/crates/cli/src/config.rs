//! `--config FILE`: a JSON object whose keys are long flag names (without
//! the dashes) and whose values are what the flag would take. Config values
//! are spliced in ahead of the command-line flags, so flags given on the
//! command line win.

use std::ffi::OsString;
use std::path::Path;

use serde_json::{Map, Value};

use crate::error::CliError;

/// Flags that are mutually exclusive with each other; a command-line flag
/// from a set drops every config entry from the same set.
const EXCLUSIVE_SETS: &[&[&str]] = &[
    &["equal", "alphas", "alphas-file", "magnitudes"],
    &["p", "p-grid"],
    &["n", "subset"],
    &["balanced", "partition", "epsilon"],
];

fn config_path(args: &[OsString]) -> Result<Option<&Path>, CliError> {
    for (k, arg) in args.iter().enumerate() {
        let Some(text) = arg.to_str() else { continue };
        if text == "--config" {
            return match args.get(k + 1) {
                Some(path) => Ok(Some(Path::new(path))),
                None => Err(CliError::Config("--config: missing file path".into())),
            };
        }
        if let Some(path) = text.strip_prefix("--config=") {
            return Ok(Some(Path::new(path)));
        }
    }
    Ok(None)
}

fn scalar(key: &str, value: &Value) -> Result<String, CliError> {
    match value {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Array(items) => {
            let nested = items.iter().any(Value::is_array);
            let sep = if nested { ";" } else { "," };
            items
                .iter()
                .map(|v| scalar(key, v))
                .collect::<Result<Vec<_>, _>>()
                .map(|v| v.join(sep))
        }
        _ => Err(CliError::Config(format!(
            "--config: value of '{key}' must be a string, number, or array"
        ))),
    }
}

fn flag_given(args: &[OsString], key: &str) -> bool {
    let flag = format!("--{key}");
    let prefixed = format!("--{key}=");
    args.iter()
        .filter_map(|a| a.to_str())
        .any(|a| a == flag || a.starts_with(&prefixed))
}

fn tokens(map: &Map<String, Value>, cli: &[OsString]) -> Result<Vec<OsString>, CliError> {
    let mut out = Vec::new();
    for (key, value) in map {
        if key == "config" {
            return Err(CliError::Config(
                "--config: config files cannot nest".into(),
            ));
        }
        let overridden = EXCLUSIVE_SETS
            .iter()
            .find(|set| set.contains(&key.as_str()))
            .map_or(flag_given(cli, key), |set| {
                set.iter().any(|k| flag_given(cli, k))
            });
        if overridden {
            continue;
        }
        match value {
            Value::Bool(true) => out.push(format!("--{key}").into()),
            Value::Bool(false) | Value::Null => {}
            other => {
                out.push(format!("--{key}").into());
                out.push(scalar(key, other)?.into());
            }
        }
    }
    Ok(out)
}

/// Splice the config file named by `--config`, if any, into `args` right
/// after the subcommand.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&args)? else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("--config: {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("--config: {}: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(CliError::Config(format!(
            "--config: {}: expected a JSON object",
            path.display()
        )));
    };
    let injected = tokens(&map, &args)?;
    if args.len() < 2 {
        return Ok(args);
    }
    let mut out = args[..2].to_vec();
    out.extend(injected);
    out.extend(args[2..].iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn values_become_flags() {
        let map: Map<String, Value> = serde_json::from_str(
            r#"{"d": 3, "N": 4, "equal": true, "pairs": false, "alphas": [[1, 0], [0, 1]], "p-grid": [0, 0.5]}"#,
        )
        .unwrap();
        let t = tokens(&map, &os(&["ghz-decay", "negativity"])).unwrap();
        let t: Vec<String> = t.into_iter().map(|s| s.into_string().unwrap()).collect();
        assert_eq!(
            t,
            ["--d", "3", "--N", "4", "--equal", "--alphas", "1,0;0,1", "--p-grid", "0,0.5"]
        );
    }

    #[test]
    fn command_line_wins() {
        let map: Map<String, Value> =
            serde_json::from_str(r#"{"d": 3, "equal": true, "p": 0.1, "precision": 8}"#).unwrap();
        let cli = os(&[
            "ghz-decay",
            "negativity",
            "--magnitudes",
            "1,1",
            "--p-grid=0,1",
            "--precision",
            "9",
        ]);
        let t = tokens(&map, &cli).unwrap();
        assert_eq!(t, os(&["--d", "3"]));
    }

    #[test]
    fn nested_config_rejected() {
        let map: Map<String, Value> = serde_json::from_str(r#"{"config": "x.json"}"#).unwrap();
        assert!(tokens(&map, &[]).is_err());
    }
}
