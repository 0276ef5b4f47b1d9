//! Result tables and their CSV / JSON-lines encodings.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::error::CliError;

/// Leading columns present in every table.
pub const META_COLUMNS: [&str; 4] = ["row", "index", "seed", "build"];

/// Bit-string columns; they look numeric in CSV but are labels.
pub const LABEL_COLUMNS: [&str; 3] = ["r", "learned", "expected"];

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    /// Numeric view used for aggregation; booleans count as 0/1.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Float(v) => Some(*v),
            Cell::Bool(v) => Some(f64::from(u8::from(*v))),
            _ => None,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u8> for Cell {
    fn from(v: u8) -> Self {
        Cell::Int(i64::from(v))
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

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// A table with the meta columns followed by `columns`.
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: META_COLUMNS.iter().chain(columns).map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, label: &str, index: usize, seed: u64, build: &str, cells: Vec<Cell>) {
        assert_eq!(cells.len() + META_COLUMNS.len(), self.columns.len(), "row width");
        let mut row = vec![Cell::Text(label.into()), index.into(), Cell::Text(seed.to_string()), Cell::Text(build.into())];
        row.extend(cells);
        self.rows.push(row);
    }

    /// Appends a `summary` row holding the mean of every numeric column.
    pub fn summarize(&mut self, seed: u64, build: &str) {
        let data = self.rows.len();
        let width = self.columns.len() - META_COLUMNS.len();
        let cells = (0..width)
            .map(|j| {
                let col = META_COLUMNS.len() + j;
                let vals: Vec<f64> = self.rows.iter().filter_map(|r| r[col].as_f64()).collect();
                if vals.is_empty() {
                    Cell::Empty
                } else {
                    Cell::Float(vals.iter().sum::<f64>() / vals.len() as f64)
                }
            })
            .collect();
        self.push("summary", data, seed, build, cells);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<(), CliError> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Jsonl => self.write_jsonl(out),
        }
    }

    fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_jsonl<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        for row in &self.rows {
            let obj: Map<String, Value> = self.columns.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
            serde_json::to_writer(&mut out, &obj).map_err(|e| CliError::Runtime(e.to_string()))?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        String::from_utf8(buf).map_err(|e| CliError::Runtime(e.to_string()))
    }
}
