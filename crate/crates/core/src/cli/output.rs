//! Tabular output as CSV or as JSON `{"columns": [...], "rows": [[...]]}`.

use std::io::Write;

use serde_json::{json, Value};

use super::{CliResult, OutputFormat};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Num(x) => x.to_string(),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => (*b as u8).to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, w: W, format: OutputFormat) -> CliResult<()> {
        match format {
            OutputFormat::Csv => {
                let mut out = csv::Writer::from_writer(w);
                out.write_record(&self.columns)?;
                for row in &self.rows {
                    out.write_record(row.iter().map(Cell::to_csv))?;
                }
                out.flush()?;
            }
            OutputFormat::Json => {
                let rows: Vec<Vec<Value>> = self.rows.iter().map(|r| r.iter().map(Cell::to_json).collect()).collect();
                let mut w = w;
                serde_json::to_writer(&mut w, &json!({ "columns": self.columns, "rows": rows }))?;
                writeln!(w)?;
            }
        }
        Ok(())
    }
}
