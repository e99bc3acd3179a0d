//! Tabular reports rendered as CSV, JSON or plain text.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{Map, Value};

use crate::args::Format;

/// Significant digits in CSV and text output.
pub const SIG_DIGITS: usize = 12;

pub const UNITS_BANNER: &str = "energies in ħΩ₀, temperatures in ħΩ₀/k_B";

/// `%g`-style rendering with [`SIG_DIGITS`] significant digits and trailing zeros removed.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    /// Blank in CSV, `null` in JSON.
    Missing,
    Bool(bool),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Missing => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Missing => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// One command's output: ordered metadata, a header row and data rows.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Lines appended verbatim after a text rendering.
    pub text_tail: Vec<String>,
    /// Prefix the text key-value lines with `#` so only `text_tail` is data.
    pub text_as_comments: bool,
}

impl Report {
    pub fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Report {
            command,
            meta: Vec::new(),
            columns,
            rows: Vec::new(),
            text_tail: Vec::new(),
            text_as_comments: false,
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.meta.push((key.into(), value.into()));
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn header_meta(&self, deterministic: bool) -> Vec<(String, Cell)> {
        let mut meta = vec![
            (
                "tool".to_string(),
                Cell::Text(format!("otto {}", env!("CARGO_PKG_VERSION"))),
            ),
            ("command".to_string(), Cell::from(self.command)),
            ("units".to_string(), Cell::from(UNITS_BANNER)),
        ];
        meta.extend(self.meta.iter().cloned());
        if !deterministic {
            let secs = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs());
            meta.push(("timestamp".to_string(), Cell::Int(secs)));
        }
        meta
    }

    pub fn render(&self, format: Format, deterministic: bool) -> String {
        let meta = self.header_meta(deterministic);
        match format {
            Format::Csv => self.render_csv(&meta),
            Format::Json => self.render_json(&meta),
            Format::Text => self.render_text(&meta),
        }
    }

    fn render_csv(&self, meta: &[(String, Cell)]) -> String {
        let mut out = String::new();
        for (k, v) in meta {
            let _ = writeln!(out, "# {k}: {}", v.render());
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self, meta: &[(String, Cell)]) -> String {
        let mut doc = Map::new();
        for (k, v) in meta {
            doc.insert(k.clone(), v.to_json());
        }
        doc.insert(
            "columns".into(),
            Value::Array(self.columns.iter().map(|c| Value::from(*c)).collect()),
        );
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON value");
        s.push('\n');
        s
    }

    /// A single row prints as `key = value` lines, several rows as aligned columns.
    fn render_text(&self, meta: &[(String, Cell)]) -> String {
        let mut out = String::new();
        for (k, v) in meta {
            let _ = writeln!(out, "# {k}: {}", v.render());
        }
        if let [row] = self.rows.as_slice() {
            let width = self.columns.iter().map(|c| c.len()).max().unwrap_or(0);
            let lead = if self.text_as_comments { "# " } else { "" };
            for (c, v) in self.columns.iter().zip(row) {
                let _ = writeln!(out, "{lead}{c:<width$} = {}", v.render());
            }
        } else {
            let cells: Vec<Vec<String>> = self
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::render).collect())
                .collect();
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].len())
                        .chain([self.columns[j].len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |items: Vec<&str>| {
                let padded: Vec<String> = items
                    .iter()
                    .zip(&widths)
                    .map(|(s, w)| format!("{s:<w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(self.columns.clone()));
            for r in &cells {
                let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
            }
        }
        for l in &self.text_tail {
            out.push_str(l);
            out.push('\n');
        }
        out
    }
}
