//! CSV and JSON writers. Every number is rounded to 12 significant digits.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::CliError;

pub const SIGNIFICANT_DIGITS: usize = 12;

/// `v` rounded to [`SIGNIFICANT_DIGITS`].
pub fn round_sig(v: f64) -> f64 {
    if v == 0.0 {
        return 0.0;
    }
    if !v.is_finite() {
        return v;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, v)
        .parse()
        .unwrap_or(v)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) if v.is_nan() => "nan".into(),
            Cell::Num(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Num(v) => format!("{:e}", round_sig(*v)),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => number(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

/// A JSON number at 12 significant digits; non-finite values become null.
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(round_sig(v)).map_or(Value::Null, Value::Number)
}

/// Rounds every number inside `v`.
pub fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => number(x),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(round_value).collect()),
        Value::Object(o) => {
            Value::Object(o.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// A command's full output.
#[derive(Debug, Clone)]
pub struct Document {
    pub command: &'static str,
    pub params: Value,
    pub table: Table,
    /// Extra top-level JSON members (summary, records, error).
    pub extra: Map<String, Value>,
}

impl Document {
    pub fn new(command: &'static str, params: Value, table: Table) -> Self {
        Self {
            command,
            params,
            table,
            extra: Map::new(),
        }
    }

    pub fn render(&self, format: Format, meta: bool) -> String {
        match format {
            Format::Csv => self.csv(meta),
            Format::Json => self.json(meta),
        }
    }

    fn csv(&self, meta: bool) -> String {
        let mut s = String::new();
        if meta {
            s.push_str(&format!(
                "# qbm {} {} generated_unix={}\n",
                env!("CARGO_PKG_VERSION"),
                self.command,
                unix_now()
            ));
        }
        s.push_str(&self.table.columns.join(","));
        s.push('\n');
        for row in &self.table.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    fn json(&self, meta: bool) -> String {
        let mut root = Map::new();
        if meta {
            root.insert(
                "meta".into(),
                json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "generated_unix": unix_now(),
                }),
            );
        }
        root.insert("command".into(), Value::String(self.command.into()));
        root.insert("params".into(), round_value(self.params.clone()));
        root.insert(
            "columns".into(),
            Value::Array(
                self.table
                    .columns
                    .iter()
                    .cloned()
                    .map(Value::String)
                    .collect(),
            ),
        );
        root.insert(
            "rows".into(),
            Value::Array(
                self.table
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect(),
            ),
        );
        for (k, v) in &self.extra {
            root.insert(k.clone(), round_value(v.clone()));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(root)).expect("serializable");
        s.push('\n');
        s
    }
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

/// Writes to `path`, or stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io {
            path: p.to_owned(),
            source: e,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io {
                    path: "<stdout>".into(),
                    source: e,
                })
        }
    }
}
