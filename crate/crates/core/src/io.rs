//! Tabular output as CSV or JSON. Floating-point cells are written with 17
//! significant digits so every emitted table re-reads bit-exactly.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(v) => format_f64(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// A header plus rows of cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.headers).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))
                .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .headers
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::to_json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn write(&self, format: Format, mut out: impl Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => write_json_value(&self.to_json(), &mut out),
        }
    }
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_json_value(v: &Value, out: &mut impl Write) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, v).map_err(|e| Error::Io(e.into()))?;
    writeln!(out)?;
    Ok(())
}

/// A single record as pretty JSON.
pub fn write_json(value: &impl Serialize, mut out: impl Write) -> Result<()> {
    let v = serde_json::to_value(value).map_err(|e| Error::Io(e.into()))?;
    write_json_value(&v, &mut out)
}

/// A single record as a two-column `key,value` CSV, flattening nested objects with dots.
pub fn write_record_csv(value: &impl Serialize, out: impl Write) -> Result<()> {
    fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, Cell)>) {
        let key = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(m) => {
                for (k, v) in m {
                    flatten(&key(k), v, rows);
                }
            }
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    flatten(&key(&i.to_string()), v, rows);
                }
            }
            Value::Number(n) => rows.push((
                prefix.to_string(),
                match n.as_u64() {
                    Some(u) => Cell::Int(u),
                    None => Cell::Num(n.as_f64().unwrap_or(f64::NAN)),
                },
            )),
            Value::String(s) => rows.push((prefix.to_string(), Cell::Text(s.clone()))),
            Value::Bool(b) => rows.push((prefix.to_string(), Cell::Bool(*b))),
            Value::Null => rows.push((prefix.to_string(), Cell::Empty)),
        }
    }
    let v = serde_json::to_value(value).map_err(|e| Error::Io(e.into()))?;
    let mut rows = Vec::new();
    flatten("", &v, &mut rows);
    let mut table = Table::new(&["key", "value"]);
    for (k, c) in rows {
        table.push(vec![Cell::Text(k), c]);
    }
    table.write_csv(out)
}

pub fn write_record(value: &impl Serialize, format: Format, out: impl Write) -> Result<()> {
    match format {
        Format::Csv => write_record_csv(value, out),
        Format::Json => write_json(value, out),
    }
}
