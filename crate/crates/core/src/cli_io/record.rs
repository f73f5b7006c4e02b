use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One output line. `elapsed_seconds` is the only volatile field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub command: String,
    pub params: Map<String, Value>,
    pub results: Map<String, Value>,
    pub elapsed_seconds: f64,
    pub tool_version: String,
}

impl ResultRecord {
    pub fn new(command: impl Into<String>, params: Map<String, Value>, results: Map<String, Value>) -> Self {
        ResultRecord {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            params,
            results,
            elapsed_seconds: 0.0,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn with_elapsed(mut self, seconds: f64) -> Self {
        self.elapsed_seconds = seconds;
        self
    }

    /// Column names of the flattened form.
    pub fn flat_keys(&self) -> Vec<String> {
        let mut keys = vec!["schema_version".to_string(), "command".to_string()];
        keys.extend(self.params.keys().map(|k| format!("params.{k}")));
        keys.extend(self.results.keys().map(|k| format!("results.{k}")));
        keys.push("elapsed_seconds".into());
        keys.push("tool_version".into());
        keys
    }

    fn flat_values(&self) -> Vec<String> {
        let mut vals = vec![self.schema_version.to_string(), self.command.clone()];
        vals.extend(self.params.values().map(cell));
        vals.extend(self.results.values().map(cell));
        vals.push(Value::from(self.elapsed_seconds).to_string());
        vals.push(self.tool_version.clone());
        vals
    }
}

/// Manifest record describing a run: tool version, resolved parameters,
/// master seed and whether any enumeration guard was lifted.
pub fn manifest(subcommand: &str, params: &Map<String, Value>, guard_override: bool) -> ResultRecord {
    let mut p = Map::new();
    p.insert("subcommand".into(), Value::from(subcommand));
    p.extend(params.clone());
    p.insert("guard_override".into(), Value::from(guard_override));
    ResultRecord::new("manifest", p, Map::new())
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Jsonl,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jsonl" | "json" => Ok(Format::Jsonl),
            "csv" => Ok(Format::Csv),
            other => Err(Error::InvalidParameter(format!("unknown format `{other}`"))),
        }
    }
}

pub fn write_records<W: Write>(out: &mut W, records: &[ResultRecord], format: Format) -> Result<()> {
    match format {
        Format::Jsonl => {
            for rec in records {
                let line = serde_json::to_string(rec).map_err(|e| Error::Record(e.to_string()))?;
                writeln!(out, "{line}").map_err(io_err)?;
            }
            Ok(())
        }
        Format::Csv => write_csv(out, records),
    }
}

fn write_csv<W: Write>(out: &mut W, records: &[ResultRecord]) -> Result<()> {
    let Some(first) = records.first() else {
        return Ok(());
    };
    let header = first.flat_keys();
    if let Some(bad) = records.iter().position(|r| r.flat_keys() != header) {
        return Err(Error::Record(format!(
            "csv needs records with identical columns; record {bad} differs from record 0"
        )));
    }
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let csv_err = |e: csv::Error| Error::Record(e.to_string());
    w.write_record(&header).map_err(csv_err)?;
    for rec in records {
        w.write_record(rec.flat_values()).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

/// Parses JSON Lines written by [`write_records`]; blank lines are skipped.
pub fn read_jsonl(text: &str) -> Result<Vec<ResultRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::Record(format!("line {}: {e}", i + 1))))
        .collect()
}

fn io_err(e: std::io::Error) -> Error {
    Error::Record(e.to_string())
}
