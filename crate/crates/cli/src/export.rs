//! CSV export of JSONL records by dotted path.

use crate::record::{format_float, read_jsonl};
use anyhow::{anyhow, Result};
use serde_json::Value;
use std::path::Path;

/// Resolves `a.b.0.c` through objects and arrays.
pub fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |cur, key| match cur {
        Value::Object(m) => m.get(key),
        Value::Array(a) => key.parse::<usize>().ok().and_then(|i| a.get(i)),
        _ => None,
    })
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format_float(n.as_f64().unwrap()),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Writes one row per record; returns the number of data rows.
pub fn export_csv(jsonl: &Path, columns: &[String], out: &Path) -> Result<usize> {
    let records = read_jsonl(jsonl)?;
    let mut w = csv::Writer::from_path(out)?;
    w.write_record(columns)?;
    for (i, r) in records.iter().enumerate() {
        let v = serde_json::to_value(r)?;
        let row = columns
            .iter()
            .map(|c| lookup(&v, c).map(cell).ok_or_else(|| anyhow!("record {i} has no column '{c}'")))
            .collect::<Result<Vec<_>>>()?;
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(records.len())
}
