//! Payload printing: JSON by default, an aligned text table with `--pretty`.

use serde_json::Value;

pub fn emit(value: &Value, pretty: bool) {
    if pretty {
        print!("{}", table(value));
    } else {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable")
        );
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, child, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

fn rows_of(v: &Value) -> Vec<(String, String)> {
    let mut out = Vec::new();
    flatten("", v, &mut out);
    out
}

/// Objects print as `key  value` lines; arrays of objects as columns.
pub fn table(value: &Value) -> String {
    let mut s = String::new();
    match value {
        Value::Array(items) if items.iter().all(Value::is_object) && !items.is_empty() => {
            let rows: Vec<Vec<(String, String)>> = items.iter().map(rows_of).collect();
            let header: Vec<&str> = rows[0].iter().map(|(k, _)| k.as_str()).collect();
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for r in &rows {
                for (w, (_, v)) in widths.iter_mut().zip(r) {
                    *w = (*w).max(v.len());
                }
            }
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            s.push_str(&line(header.clone()));
            s.push('\n');
            for r in &rows {
                s.push_str(&line(r.iter().map(|(_, v)| v.as_str()).collect()));
                s.push('\n');
            }
        }
        other => {
            let rows = rows_of(other);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in rows {
                s.push_str(&format!("{k:<width$}  {v}\n"));
            }
        }
    }
    s
}
