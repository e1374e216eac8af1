use std::ffi::OsString;
use std::fs;
use std::path::Path;

use crate::error::CliError;

/// Splices `--key value` pairs from the `--config` file (if any) in right
/// after the subcommand name. Keys whose flag also appears on the command
/// line are dropped, so the command line wins.
pub fn expand(argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    if argv.len() < 2 || argv[1].to_string_lossy().starts_with('-') {
        return Err(CliError::Usage("--config must follow the subcommand".into()));
    }
    let given: Vec<String> = argv[2..]
        .iter()
        .filter_map(|a| {
            let s = a.to_string_lossy();
            s.starts_with("--").then(|| s.split('=').next().unwrap_or_default().to_string())
        })
        .collect();
    let injected = read_flags(Path::new(&path), &given)?;
    let mut out = Vec::with_capacity(argv.len() + injected.len());
    out.extend(argv[..2].iter().cloned());
    out.extend(injected);
    out.extend(argv[2..].iter().cloned());
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<OsString> {
    let mut found = None;
    let mut it = argv.iter().skip(1);
    while let Some(arg) = it.next() {
        let s = arg.to_string_lossy();
        if s == "--" {
            break;
        }
        if s == "--config" {
            found = it.next().cloned();
        } else if let Some(v) = s.strip_prefix("--config=") {
            found = Some(OsString::from(v));
        }
    }
    found
}

fn read_flags(path: &Path, given: &[String]) -> Result<Vec<OsString>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Usage(format!("config file {}: {}", path.display(), e.message())))?;
    let mut out = Vec::new();
    for (key, value) in table {
        let flag = format!("--{}", key.replace('_', "-"));
        if flag == "--config" {
            return Err(CliError::Usage("config files cannot include other config files".into()));
        }
        if given.contains(&flag) {
            continue;
        }
        match value {
            toml::Value::Boolean(true) => out.push(flag.into()),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                out.push(flag.into());
                out.push(parts.join(",").into());
            }
            other => {
                out.push(flag.into());
                out.push(scalar(&other)?.into());
            }
        }
    }
    Ok(out)
}

fn scalar(v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        other => Err(CliError::Usage(format!("unsupported config value {other}; the file must be flat"))),
    }
}
