//! `key = value` config files, merged into argv as long flags.
//!
//! A key is a long flag name of the chosen subcommand (or a global flag).
//! Values are injected only for flags absent from the command line, so
//! explicit flags always win.

use std::fs;

use clap::Command;

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, String> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| format!("config line {line}: expected key = value"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(format!("config line {line}: empty key"));
        }
        out.push(Entry {
            key: key.replace('_', "-"),
            value: value.trim().to_string(),
            line,
        });
    }
    Ok(out)
}

/// Removes `--config <path>` / `--config=<path>` from `args` and returns the path.
pub fn take_config_path(args: &mut Vec<String>) -> Result<Option<String>, String> {
    let mut path = None;
    let mut i = 0;
    while i < args.len() {
        if args[i] == "--" {
            break;
        }
        if args[i] == "--config" {
            let value = args
                .get(i + 1)
                .cloned()
                .ok_or("--config needs a file path")?;
            args.drain(i..i + 2);
            path = Some(value);
            continue;
        }
        if let Some(value) = args[i].strip_prefix("--config=") {
            path = Some(value.to_string());
            args.remove(i);
            continue;
        }
        i += 1;
    }
    Ok(path)
}

fn present(args: &[String], key: &str) -> bool {
    let flag = format!("--{key}");
    let with_value = format!("{flag}=");
    args.iter()
        .any(|a| *a == flag || a.starts_with(&with_value))
}

fn truthy(value: &str) -> Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(format!("expected a boolean, got {other:?}")),
    }
}

/// Appends config values to `args` (after the subcommand) as long flags.
pub fn merge(args: &mut Vec<String>, entries: &[Entry], cmd: &Command) -> Result<(), String> {
    let sub_name = args.iter().skip(1).find(|a| !a.starts_with('-')).cloned();
    let sub = sub_name.as_deref().and_then(|n| cmd.find_subcommand(n));
    let lookup = |key: &str| {
        sub.and_then(|s| s.get_arguments().find(|a| a.get_long() == Some(key)))
            .or_else(|| cmd.get_arguments().find(|a| a.get_long() == Some(key)))
            .cloned()
    };
    let mut extra = Vec::new();
    for e in entries {
        let arg = lookup(&e.key).ok_or_else(|| {
            format!(
                "config line {}: unknown key {:?} for {}",
                e.line,
                e.key,
                sub_name.as_deref().unwrap_or("this command")
            )
        })?;
        if present(args, &e.key) {
            continue;
        }
        if arg.get_action().takes_values() {
            extra.push(format!("--{}={}", e.key, e.value));
        } else if truthy(&e.value).map_err(|m| format!("config line {}: {m}", e.line))? {
            extra.push(format!("--{}", e.key));
        }
    }
    match args.iter().position(|a| a == "--") {
        Some(pos) => {
            args.splice(pos..pos, extra);
        }
        None => args.extend(extra),
    }
    Ok(())
}

pub fn load(path: &str) -> Result<Vec<Entry>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    parse(&text)
}
