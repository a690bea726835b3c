//! Tabular results and their CSV / JSON renderings.
//!
//! Numbers are rounded to a fixed count of significant digits and then
//! printed in the shortest form that parses back to the rounded value, so
//! output is locale independent and round-trips exactly.

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: usize = 12;
pub const MIN_PRECISION: usize = 6;
pub const MAX_PRECISION: usize = 17;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(Option<f64>),
    Text(String),
    Bool(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(Some(v))
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        Cell::Float(v)
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

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Float(v) => *v,
            Cell::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn render(&self, precision: usize) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(Some(v)) => format_float(*v, precision),
            Cell::Float(None) => String::new(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self, precision: usize) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(Some(v)) => serde_json::Number::from_f64(round_significant(*v, precision))
                .map(Value::Number)
                .unwrap_or(Value::Null),
            Cell::Float(None) => Value::Null,
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

pub fn check_precision(precision: usize) -> Result<()> {
    if (MIN_PRECISION..=MAX_PRECISION).contains(&precision) {
        Ok(())
    } else {
        Err(Error::InvalidRequest(format!(
            "precision {precision} outside [{MIN_PRECISION}, {MAX_PRECISION}]"
        )))
    }
}

/// Round to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

pub fn format_float(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let v = round_significant(x, digits);
    let mag = v.abs();
    if v == 0.0 || (1e-5..1e15).contains(&mag) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Provenance stamped into emitted files.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub settings: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(settings: Vec<(String, String)>) -> Self {
        Provenance {
            tool: "ghz-decay".into(),
            version: crate::VERSION.into(),
            settings,
        }
    }

    /// One-line summary, e.g. `ghz-decay 0.1.0; scan_step=0.001; ...`.
    pub fn summary(&self) -> String {
        let mut s = format!("{} {}", self.tool, self.version);
        for (k, v) in &self.settings {
            s.push_str(&format!("; {k}={v}"));
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub provenance: Provenance,
}

impl SweepTable {
    pub fn new(columns: &[&str], provenance: Provenance) -> Self {
        SweepTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            provenance,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Values of a numeric column, `None` where empty.
    pub fn column_f64(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64()).collect())
    }

    /// CSV with one header line, optionally preceded by `# comment`.
    /// LF line endings.
    pub fn to_csv(&self, precision: usize, comment: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(c) = comment {
            out.push_str("# ");
            out.push_str(&c.replace('\n', " "));
            out.push('\n');
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render(precision)))
                .expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
        out
    }

    /// Array of objects keyed by column name.
    pub fn to_json(&self, precision: usize) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, c)| (k.clone(), c.to_json(precision)))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}
