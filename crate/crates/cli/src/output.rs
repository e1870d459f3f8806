//! Tables and their CSV/JSON rendering.
//!
//! Floats are printed in shortest round-trip form, so output is byte-stable
//! for a given floating-point environment.

use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    U(usize),
    S(String),
    Null,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::F(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::U(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::S(s.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Null, Cell::F)
    }
}

/// Result of one command. `single` marks a one-record result (JSON by default).
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra comment lines (CSV) or `notes` entries (JSON).
    pub notes: Vec<String>,
    pub single: bool,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new(), notes: Vec::new(), single: false }
    }

    pub fn single(header: Vec<&'static str>, row: Vec<Cell>) -> Self {
        Table { header, rows: vec![row], notes: Vec::new(), single: true }
    }

    pub fn default_format(&self) -> Format {
        if self.single {
            Format::Json
        } else {
            Format::Csv
        }
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() || (1e-4..1e6).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn csv_cell(c: &Cell) -> String {
    match c {
        Cell::F(x) => fmt_f64(*x),
        Cell::U(n) => n.to_string(),
        Cell::S(s) => s.clone(),
        Cell::Null => String::new(),
    }
}

fn json_cell(c: &Cell) -> Value {
    match c {
        Cell::F(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
        Cell::U(n) => Value::from(*n),
        Cell::S(s) => Value::from(s.as_str()),
        Cell::Null => Value::Null,
    }
}

/// `key=value` pairs of a flat JSON object, in key order.
pub fn config_line(command: &str, config: &Map<String, Value>) -> String {
    let mut s = format!("lmgc {command}");
    for (k, v) in config {
        let v = match v {
            Value::Null => continue,
            Value::String(t) => t.clone(),
            other => other.to_string(),
        };
        s.push_str(&format!(" {k}={v}"));
    }
    s
}

pub fn render(table: &Table, format: Format, command: &str, config: &Map<String, Value>) -> String {
    match format {
        Format::Csv => render_csv(table, command, config),
        Format::Json => render_json(table, command, config),
    }
}

fn render_csv(table: &Table, command: &str, config: &Map<String, Value>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut head = format!("# {}\n", config_line(command, config));
    for n in &table.notes {
        head.push_str(&format!("# {n}\n"));
    }
    // writes into a Vec cannot fail
    w.write_record(&table.header).expect("in-memory csv");
    for r in &table.rows {
        w.write_record(r.iter().map(csv_cell)).expect("in-memory csv");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv");
    head + &body
}

fn row_object(header: &[&str], row: &[Cell]) -> Map<String, Value> {
    header.iter().zip(row).map(|(h, c)| (h.to_string(), json_cell(c))).collect()
}

fn render_json(table: &Table, command: &str, config: &Map<String, Value>) -> String {
    let mut out = Map::new();
    out.insert("command".into(), Value::from(command));
    out.insert("config".into(), Value::Object(config.clone()));
    if !table.notes.is_empty() {
        out.insert("notes".into(), Value::from(table.notes.clone()));
    }
    if table.single && table.rows.len() == 1 {
        out.extend(row_object(&table.header, &table.rows[0]));
    } else {
        let rows = table.rows.iter().map(|r| Value::Object(row_object(&table.header, r))).collect();
        out.insert("rows".into(), Value::Array(rows));
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(out)).expect("json values are finite or null");
    s.push('\n');
    s
}
