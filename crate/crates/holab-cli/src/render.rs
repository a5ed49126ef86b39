//! Deterministic report rendering: text, JSON and CSV.
//!
//! Identical invocations must produce byte-identical documents, so floats
//! are printed with a fixed 12-significant-digit scientific format, minus
//! zero is normalized, and no wall-clock data enters a report unless the
//! caller opted in.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (expected text, json or csv)")),
        }
    }
}

/// 12 significant digits, scientific, minus-zero normalized.
pub fn fmt_f(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

#[derive(Serialize)]
#[serde(untagged)]
pub enum Value {
    Str(String),
    Bool(bool),
    Int(i64),
    List(Vec<String>),
    Table(Vec<Row>),
    Matrix(MatrixValue),
}

#[derive(Serialize)]
pub struct Row {
    pub label: String,
    pub residual: String,
}

#[derive(Serialize)]
pub struct MatrixValue {
    pub rows: usize,
    pub cols: usize,
    /// Row-major entries, fixed formatting.
    pub entries: Vec<String>,
}

pub fn matrix_value(m: &DMatrix<f64>) -> Value {
    let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            entries.push(fmt_f(m[(i, j)]));
        }
    }
    Value::Matrix(MatrixValue { rows: m.nrows(), cols: m.ncols(), entries })
}

/// An ordered report document.
#[derive(Serialize)]
pub struct Report {
    #[serde(skip)]
    order: Vec<String>,
    #[serde(flatten)]
    fields: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report { order: Vec::new(), fields: serde_json::Map::new() };
        r.push("command", Value::Str(command.to_string()));
        r
    }

    pub fn push(&mut self, key: &str, value: Value) {
        self.order.push(key.to_string());
        self.fields
            .insert(key.to_string(), serde_json::to_value(&value).expect("serializable"));
    }

    pub fn push_f(&mut self, key: &str, x: f64) {
        self.push(key, Value::Str(fmt_f(x)));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut ordered = serde_json::Map::new();
                for key in &self.order {
                    ordered.insert(key.clone(), self.fields[key].clone());
                }
                let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(ordered))
                    .expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                for key in &self.order {
                    render_text(&mut out, key, &self.fields[key], 0);
                }
                out
            }
            Format::Csv => {
                let mut out = String::from("key,label,value\n");
                for key in &self.order {
                    render_csv(&mut out, key, &self.fields[key]);
                }
                out
            }
        }
    }
}

fn render_text(out: &mut String, key: &str, v: &serde_json::Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        serde_json::Value::Array(items) => {
            if items.iter().all(|x| x.is_string()) {
                let joined: Vec<String> = items
                    .iter()
                    .map(|x| x.as_str().unwrap_or_default().to_string())
                    .collect();
                let _ = writeln!(out, "{pad}{key}: {}", joined.join(" "));
            } else {
                let _ = writeln!(out, "{pad}{key}:");
                for item in items {
                    match (item.get("label"), item.get("residual")) {
                        (Some(l), Some(r)) => {
                            let label = l.as_str().unwrap_or_default();
                            let residual = r.as_str().unwrap_or_default();
                            if residual.is_empty() {
                                let _ = writeln!(out, "{pad}  {label}");
                            } else {
                                let _ = writeln!(out, "{pad}  {label} residual {residual}");
                            }
                        }
                        _ => {
                            let _ = writeln!(out, "{pad}  {item}");
                        }
                    }
                }
            }
        }
        serde_json::Value::Object(map) if map.contains_key("entries") => {
            let rows = map["rows"].as_u64().unwrap_or(0) as usize;
            let cols = map["cols"].as_u64().unwrap_or(0) as usize;
            let _ = writeln!(out, "{pad}{key}: matrix {rows}x{cols} (row-major)");
            let entries = map["entries"].as_array().cloned().unwrap_or_default();
            for i in 0..rows {
                let row: Vec<String> = (0..cols)
                    .map(|j| entries[i * cols + j].as_str().unwrap_or_default().to_string())
                    .collect();
                let _ = writeln!(out, "{pad}  {}", row.join(" "));
            }
        }
        serde_json::Value::String(s) => {
            let _ = writeln!(out, "{pad}{key}: {s}");
        }
        other => {
            let _ = writeln!(out, "{pad}{key}: {other}");
        }
    }
}

fn render_csv(out: &mut String, key: &str, v: &serde_json::Value) {
    let escape = |s: &str| -> String {
        if s.contains(',') || s.contains('"') {
            format!("\"{}\"", s.replace('"', "\"\""))
        } else {
            s.to_string()
        }
    };
    match v {
        serde_json::Value::Array(items) if items.iter().any(|x| x.is_object()) => {
            for item in items {
                if let (Some(l), Some(r)) = (item.get("label"), item.get("residual")) {
                    let _ = writeln!(
                        out,
                        "{key},{},{}",
                        escape(l.as_str().unwrap_or_default()),
                        r.as_str().unwrap_or_default()
                    );
                }
            }
        }
        serde_json::Value::Object(map) if map.contains_key("entries") => {
            let entries = map["entries"].as_array().cloned().unwrap_or_default();
            let joined: Vec<String> = entries
                .iter()
                .map(|x| x.as_str().unwrap_or_default().to_string())
                .collect();
            let _ = writeln!(out, "{key},matrix,{}", escape(&joined.join(" ")));
        }
        serde_json::Value::Array(items) => {
            let joined: Vec<String> = items
                .iter()
                .map(|x| x.as_str().unwrap_or_default().to_string())
                .collect();
            let _ = writeln!(out, "{key},,{}", escape(&joined.join(" ")));
        }
        serde_json::Value::String(s) => {
            let _ = writeln!(out, "{key},,{}", escape(s));
        }
        other => {
            let _ = writeln!(out, "{key},,{}", escape(&other.to_string()));
        }
    }
}
