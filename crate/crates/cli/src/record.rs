//! Result records and their JSONL persistence.

use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;
use serde_json::Value;
use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub v: u32,
    pub experiment: String,
    pub params: Value,
    pub estimates: Value,
    pub seed: u64,
    pub tool_version: String,
    pub wall_time_ms: u64,
}

impl ResultRecord {
    pub fn new(experiment: &str, params: Value, estimates: Value, seed: u64, wall_time_ms: u64) -> Self {
        ResultRecord {
            v: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            params,
            estimates,
            seed,
            tool_version: TOOL_VERSION.to_string(),
            wall_time_ms,
        }
    }

    /// Everything except the wall time, for reproducibility comparisons.
    pub fn reproducible_part(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("record serializes");
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    }
}

/// Writes floats with 17 significant digits.
struct SeventeenDigits;

impl Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{}", format_float(value))
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json_line<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("JSON is UTF-8"))
}

pub fn append_jsonl(path: &Path, records: &[ResultRecord]) -> anyhow::Result<()> {
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    for r in records {
        writeln!(f, "{}", to_json_line(r)?)?;
    }
    Ok(())
}

pub fn read_jsonl(path: &Path) -> anyhow::Result<Vec<ResultRecord>> {
    let text = std::fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| anyhow::anyhow!("record {i}: {e}")))
        .collect()
}
