//! Table and JSON rendering.
//!
//! JSON carries full `f64` precision. CSV prints six significant digits.

use std::io::Write;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Field {
    fn render(&self) -> String {
        match self {
            Field::Num(v) => fmt_sig(*v, 6),
            Field::Int(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Empty => String::new(),
        }
    }
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as u64)
    }
}

impl From<u64> for Field {
    fn from(v: u64) -> Self {
        Field::Int(v)
    }
}

impl From<bool> for Field {
    fn from(v: bool) -> Self {
        Field::Bool(v)
    }
}

impl From<String> for Field {
    fn from(v: String) -> Self {
        Field::Text(v)
    }
}

impl<T: Into<Field>> From<Option<T>> for Field {
    fn from(v: Option<T>) -> Self {
        v.map_or(Field::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Field>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// First column holding a NaN or infinite number, if any.
    pub fn non_finite_column(&self) -> Option<&'static str> {
        self.rows.iter().find_map(|row| {
            row.iter()
                .zip(&self.columns)
                .find(|(f, _)| matches!(f, Field::Num(v) if !v.is_finite()))
                .map(|(_, c)| *c)
        })
    }

    pub fn to_csv(&self) -> Result<String, csv::Error> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Field::render))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// A command result in both output shapes.
pub struct Rendered {
    pub json: serde_json::Value,
    pub table: Table,
}

impl Rendered {
    pub fn new<T: Serialize>(value: &T, table: Table) -> Self {
        Self {
            json: serde_json::to_value(value).expect("result serializes to JSON"),
            table,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub fn write(rendered: &Rendered, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rendered.json)?;
            writeln!(out)
        }
        Format::Csv => {
            let text = rendered.table.to_csv().map_err(std::io::Error::other)?;
            out.write_all(text.as_bytes())
        }
    }
}

/// `%g`-style formatting with `digits` significant digits.
pub fn fmt_sig(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.7777777777, 6), "0.777778");
        assert_eq!(fmt_sig(1.0, 6), "1");
        assert_eq!(fmt_sig(2765.9523, 6), "2765.95");
        assert_eq!(fmt_sig(-113.0103, 6), "-113.01");
        assert_eq!(fmt_sig(1.6849e-12, 6), "1.6849e-12");
        assert_eq!(fmt_sig(9.9999996, 6), "10");
        assert_eq!(fmt_sig(1234567.0, 6), "1.23457e6");
        assert_eq!(fmt_sig(0.0, 6), "0");
    }

    #[test]
    fn csv_has_header_and_quotes() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Field::Num(0.5), Field::Text("x, y".into())]);
        t.push(vec![Field::Empty, Field::Int(3)]);
        assert_eq!(t.to_csv().unwrap(), "a,b\r\n0.5,\"x, y\"\r\n,3\r\n");
    }

    #[test]
    fn detects_non_finite() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Field::Num(1.0), Field::Empty]);
        assert_eq!(t.non_finite_column(), None);
        t.push(vec![Field::Int(2), Field::Num(f64::NAN)]);
        assert_eq!(t.non_finite_column(), Some("b"));
    }
}
