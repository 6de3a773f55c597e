//! Documents emitted by the verbs, rendered as JSON, CSV or text.

use std::io::Write;

use clap::ValueEnum;
use qvdc_core::rational::{format_sig, to_decimal, to_pq};
use qvdc_core::{Complex64, Rational};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone)]
pub enum Cell {
    Rat(Rational),
    Int(i128),
    Float(f64),
    Complex(Complex64),
    Text(String),
    Bool(bool),
    /// Nested data; compact JSON in CSV and text.
    Json(Value),
}

impl From<Rational> for Cell {
    fn from(r: Rational) -> Self {
        Cell::Rat(r)
    }
}
impl From<&Rational> for Cell {
    fn from(r: &Rational) -> Self {
        Cell::Rat(r.clone())
    }
}
impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}
impl From<Complex64> for Cell {
    fn from(z: Complex64) -> Self {
        Cell::Complex(z)
    }
}
impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}
impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}
impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}
impl From<Value> for Cell {
    fn from(v: Value) -> Self {
        Cell::Json(v)
    }
}
macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(n: $t) -> Self {
                Cell::Int(n as i128)
            }
        }
    )*};
}
int_cell!(u32, u64, usize, i64, i32);

impl Cell {
    fn json(&self) -> Value {
        match self {
            Cell::Rat(r) => Value::String(to_pq(r)),
            Cell::Int(n) => json!(n),
            Cell::Float(x) => json!(x),
            Cell::Complex(z) => json!([z.re, z.im]),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Bool(b) => json!(b),
            Cell::Json(v) => v.clone(),
        }
    }

    /// Column suffixes and values for CSV.
    fn csv(&self) -> Vec<(&'static str, String)> {
        match self {
            Cell::Rat(r) => vec![("", to_pq(r)), ("_decimal", to_decimal(r))],
            Cell::Complex(z) => vec![("_re", format_sig(z.re, 12)), ("_im", format_sig(z.im, 12))],
            other => vec![("", other.text())],
        }
    }

    fn text(&self) -> String {
        match self {
            Cell::Rat(r) => to_pq(r),
            Cell::Int(n) => n.to_string(),
            Cell::Float(x) => format_sig(*x, 12),
            Cell::Complex(z) => format!("{} {} i", format_sig(z.re, 12), format_sig(z.im, 12)),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Json(v) => v.to_string(),
        }
    }
}

pub type Row = Vec<(&'static str, Cell)>;

#[derive(Debug, Clone)]
pub enum Doc {
    Record(Row),
    Table(Vec<Row>),
}

impl Doc {
    pub fn json(&self) -> Value {
        let obj = |row: &Row| Value::Object(row.iter().map(|(k, c)| (k.to_string(), c.json())).collect());
        match self {
            Doc::Record(r) => obj(r),
            Doc::Table(rows) => Value::Array(rows.iter().map(obj).collect()),
        }
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> anyhow::Result<()> {
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&self.json())?)?,
            Format::Csv => self.write_csv(out)?,
            Format::Text => self.write_text(out)?,
        }
        Ok(())
    }

    fn rows(&self) -> &[Row] {
        match self {
            Doc::Record(r) => std::slice::from_ref(r),
            Doc::Table(rows) => rows,
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let rows = self.rows();
        if let Some(first) = rows.first() {
            let header: Vec<String> = first
                .iter()
                .flat_map(|(k, c)| c.csv().into_iter().map(move |(suffix, _)| format!("{k}{suffix}")))
                .collect();
            w.write_record(&header)?;
        }
        for row in rows {
            let fields: Vec<String> = row.iter().flat_map(|(_, c)| c.csv().into_iter().map(|(_, v)| v)).collect();
            w.write_record(&fields)?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_text(&self, out: &mut dyn Write) -> anyhow::Result<()> {
        match self {
            Doc::Record(row) => {
                let width = row.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                for (k, c) in row {
                    match c {
                        Cell::Rat(r) => writeln!(out, "{k:<width$}  {} ({})", to_pq(r), to_decimal(r))?,
                        _ => writeln!(out, "{k:<width$}  {}", c.text())?,
                    }
                }
            }
            Doc::Table(rows) => {
                let Some(first) = rows.first() else { return Ok(()) };
                let cells: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|(_, c)| c.text()).collect()).collect();
                let widths: Vec<usize> = first
                    .iter()
                    .enumerate()
                    .map(|(i, (k, _))| cells.iter().map(|r| r[i].len()).max().unwrap_or(0).max(k.len()))
                    .collect();
                let line = |vals: Vec<&str>| {
                    vals.iter().zip(&widths).map(|(v, w)| format!("{v:<w$}")).collect::<Vec<_>>().join("  ")
                };
                writeln!(out, "{}", line(first.iter().map(|(k, _)| *k).collect()).trim_end())?;
                for r in &cells {
                    writeln!(out, "{}", line(r.iter().map(String::as_str).collect()).trim_end())?;
                }
            }
        }
        Ok(())
    }
}

/// Shorthand for building a row.
#[macro_export]
macro_rules! row {
    ($($k:literal => $v:expr),* $(,)?) => {
        vec![$(($k, $crate::output::Cell::from($v))),*]
    };
}
