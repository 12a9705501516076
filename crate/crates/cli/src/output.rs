//! Tables and reports rendered as RFC-4180 CSV or flat JSON.

use std::io::Write;

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::config::Format;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 17 significant digits in scientific notation; exact round trip.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => num(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.clone()),
        }
    }
}

/// A finite float as a JSON number; non-finite values as `"inf"`, `"-inf"`,
/// `"nan"` strings since JSON has no literal for them.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::from(format_float(v)))
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(out);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv))?;
        }
        w.flush()
    }

    pub fn json_rows(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let obj: Map<String, Value> =
                        self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// Command result: an optional data table plus flat metadata.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Output {
    pub table: Option<Table>,
    pub meta: Map<String, Value>,
}

impl Output {
    pub fn meta(&mut self, key: &str, v: impl Into<Value>) {
        self.meta.insert(key.to_string(), v.into());
    }

    pub fn meta_num(&mut self, key: &str, v: f64) {
        self.meta.insert(key.to_string(), num(v));
    }

    /// The JSON document: metadata keys with the table under `"rows"`.
    pub fn to_json(&self) -> Value {
        let mut obj = self.meta.clone();
        if let Some(t) = &self.table {
            obj.insert("rows".into(), t.json_rows());
        }
        Value::Object(obj)
    }

    /// Render in `format`. CSV carries the table only; metadata goes to
    /// `meta_sink` as a JSON object so data rows stay free of run details.
    pub fn render<W: Write, M: Write>(&self, format: Format, mut out: W, mut meta_sink: M) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                writeln!(out)?;
            }
            Format::Csv => {
                match &self.table {
                    Some(t) => t.write_csv(&mut out)?,
                    None => {
                        // Reports without a table become key,value rows.
                        let mut t = Table::new(vec!["key", "value"]);
                        for (k, v) in &self.meta {
                            let cell = match v {
                                Value::String(s) => Cell::Text(s.clone()),
                                Value::Number(n) => n.as_f64().map(Cell::Num).unwrap_or(Cell::Text(n.to_string())),
                                other => Cell::Text(other.to_string()),
                            };
                            t.push(vec![Cell::Text(k.clone()), cell]);
                        }
                        t.write_csv(&mut out)?;
                        return Ok(());
                    }
                }
                serde_json::to_writer_pretty(&mut meta_sink, &Value::Object(self.meta.clone()))?;
                writeln!(meta_sink)?;
            }
        }
        Ok(())
    }
}

/// Hex SHA-256 of the canonical JSON of `value`.
pub fn fingerprint<T: serde::Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).unwrap_or_default();
    let digest = Sha256::digest(&bytes);
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
