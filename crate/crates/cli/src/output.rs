//! Row formatting for CSV and JSON lines.

use serde_json::{Map, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest round-trip text of `x`, in exponent form outside `[1e-4, 1e15)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // Round-trips through the CSV text so both formats agree bit for bit.
            Cell::Num(x) if x.is_finite() => serde_json::from_str(&num(*x)).unwrap_or(Value::Null),
            Cell::Num(_) => Value::Null,
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

/// A table with a fixed header, rendered in either format.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(Cell::csv).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            Format::Jsonl => {
                for r in &self.rows {
                    let mut obj = Map::new();
                    obj.insert("schema_version".into(), Value::from(SCHEMA_VERSION));
                    for (k, c) in self.columns.iter().zip(r) {
                        obj.insert((*k).into(), c.json());
                    }
                    out.push_str(&Value::Object(obj).to_string());
                    out.push('\n');
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_text() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(12.5), "12.5");
        assert_eq!(num(0.1), "0.1");
        assert_eq!(num(1.5e-7), "1.5e-7");
        assert_eq!(num(f64::NAN), "NaN");
        for x in [0.672571049505295, 1.5e-7, 3.0e20, -2.25] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn renders_both_formats() {
        let mut t = Table::new(vec!["snr_db", "method", "value"]);
        t.push(vec![Cell::Num(5.0), Cell::Text("mc".into()), Cell::Num(2.5e-9)]);
        assert_eq!(t.render(Format::Csv), "snr_db,method,value\n5,mc,2.5e-9\n");
        let line = t.render(Format::Jsonl);
        let v: Value = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["method"], "mc");
        assert_eq!(v["value"].as_f64().unwrap(), 2.5e-9);
    }
}
