//! CSV and JSON rendering of run results.
//!
//! Every number is written with 17 significant digits, which round-trips
//! any `f64` exactly, so identical runs produce byte-identical files.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Number, Value};

use crate::config::Format;
use crate::error::{Error, Result};

/// A scalar cell or metadata value.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Number(f64),
    Integer(i64),
    Bool(bool),
    Text(String),
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Number(v)
    }
}

impl From<i64> for Field {
    fn from(v: i64) -> Self {
        Field::Integer(v)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        i64::try_from(v).map_or_else(|_| Field::Text(v.to_string()), Field::Integer)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Integer(v as i64)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_string())
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

/// `v` in scientific notation with 17 significant digits; non-finite values
/// print as `nan`, `inf` or `-inf`.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

impl Field {
    fn text(&self) -> String {
        match self {
            Field::Number(v) => format_number(*v),
            Field::Integer(v) => v.to_string(),
            Field::Bool(v) => v.to_string(),
            Field::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Field::Number(v) if v.is_finite() => {
                Value::Number(Number::from_str(&format_number(*v)).expect("formatted float is a JSON number"))
            }
            Field::Number(_) => Value::Null,
            Field::Integer(v) => Value::from(*v),
            Field::Bool(v) => Value::Bool(*v),
            Field::Text(s) => Value::String(s.clone()),
        }
    }
}

/// Named columns of numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Table(Table),
    Record(Vec<(String, Field)>),
}

/// One output artifact: the producing command, metadata (including the
/// effective tolerances) and a table or a flat record.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub command: String,
    pub metadata: Vec<(String, Field)>,
    pub body: Body,
}

impl Document {
    pub fn new(command: &str, body: Body) -> Self {
        Self {
            command: command.to_string(),
            metadata: Vec::new(),
            body,
        }
    }

    pub fn meta(mut self, key: &str, value: impl Into<Field>) -> Self {
        self.metadata.push((key.to_string(), value.into()));
        self
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Metadata as `# key = value` comment lines, then a header row.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        writeln!(out, "# command = {}", self.command).expect("string write");
        for (k, v) in &self.metadata {
            writeln!(out, "# {k} = {}", v.text()).expect("string write");
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
        match &self.body {
            Body::Table(t) => {
                w.write_record(&t.columns).map_err(csv_err)?;
                for row in &t.rows {
                    w.write_record(row.iter().map(|v| format_number(*v))).map_err(csv_err)?;
                }
            }
            Body::Record(fields) => {
                w.write_record(["key", "value"]).map_err(csv_err)?;
                for (k, v) in fields {
                    w.write_record([k.clone(), v.text()]).map_err(csv_err)?;
                }
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let record = |fields: &[(String, Field)]| -> Value {
            Value::Object(fields.iter().map(|(k, v)| (k.clone(), v.json())).collect::<Map<_, _>>())
        };
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("metadata".into(), record(&self.metadata));
        match &self.body {
            Body::Table(t) => {
                root.insert("columns".into(), Value::from(t.columns.clone()));
                let rows = t
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(|v| Field::Number(*v).json()).collect()))
                    .collect();
                root.insert("rows".into(), Value::Array(rows));
            }
            Body::Record(fields) => {
                root.insert("result".into(), record(fields));
            }
        }
        let mut text =
            serde_json::to_string_pretty(&Value::Object(root)).map_err(|e| Error::Io(std::io::Error::other(e)))?;
        text.push('\n');
        Ok(text)
    }
}
