use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use clap::ValueEnum;
use serde_json::{Map, Value};
use xdiscord::scan::fmt17;
use xdiscord::{write_csv, Error, ScanRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad input file, invalid state: exit 2.
    Usage(String),
    /// Library self-check failed: exit 3.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidState(_) => CliError::Usage(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Usage(format!("i/o error: {e}"))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn open(path: Option<&Path>) -> CliResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Usage(format!("cannot write {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Nested objects become dotted column names.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        _ => out.push((prefix.to_string(), v.clone())),
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt17(x),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A single result object, as JSON or as a one-row CSV.
pub fn emit_object(v: &Map<String, Value>, format: Format, path: Option<&Path>) -> CliResult<()> {
    let mut w = open(path)?;
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, v)
                .map_err(|e| CliError::Internal(format!("serialisation failed: {e}")))?;
            writeln!(w)?;
        }
        Format::Csv => {
            let mut cells = Vec::new();
            flatten("", &Value::Object(v.clone()), &mut cells);
            let header: Vec<&str> = cells.iter().map(|(k, _)| k.as_str()).collect();
            let row: Vec<String> = cells.iter().map(|(_, v)| csv_cell(v)).collect();
            writeln!(w, "{}", header.join(","))?;
            writeln!(w, "{}", row.join(","))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn emit_records(
    records: &[ScanRecord<f64>],
    format: Format,
    path: Option<&Path>,
) -> CliResult<()> {
    let mut w = open(path)?;
    match format {
        Format::Csv => write_csv(records, &mut w)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, records)
                .map_err(|e| CliError::Internal(format!("serialisation failed: {e}")))?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Serialises `value` and merges its top-level fields into `into`.
pub fn merge<S: serde::Serialize>(into: &mut Map<String, Value>, value: &S) -> CliResult<()> {
    match serde_json::to_value(value) {
        Ok(Value::Object(m)) => {
            into.extend(m);
            Ok(())
        }
        Ok(other) => Err(CliError::Internal(format!(
            "expected an object, got {other}"
        ))),
        Err(e) => Err(CliError::Internal(format!("serialisation failed: {e}"))),
    }
}
