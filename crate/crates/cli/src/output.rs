use std::fmt::Write as _;

use otto_core::format_sig;
use serde_json::{json, Map, Value};

/// Significant digits of every number in CSV output.
pub const CSV_DIGITS: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// A table with its provenance. `header` holds the resolved configuration,
/// `notes` any run summary that is not part of the rows.
#[derive(Debug, Clone, Default)]
pub struct Document {
    pub header: Vec<(String, String)>,
    pub notes: Vec<(String, Value)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Replaces the CSV table body verbatim when set.
    pub body: Option<String>,
    /// Extra top-level fields of the JSON output.
    pub json_extra: Map<String, Value>,
}

impl Document {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, ..Self::default() }
    }

    pub fn header(&mut self, key: &str, value: impl ToString) {
        self.header.push((key.to_string(), value.to_string()));
    }

    pub fn note(&mut self, key: &str, value: Value) {
        self.notes.push((key.to_string(), value));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json()).expect("JSON values always serialize");
                s.push('\n');
                s
            }
        }
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k} = {v}");
        }
        for (k, v) in &self.notes {
            let _ = writeln!(out, "# result: {k} = {}", note_text(v));
        }
        if let Some(body) = &self.body {
            out.push_str(body);
            return out;
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => format_sig(*x, CSV_DIGITS),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn json(&self) -> Value {
        let config: Map<String, Value> = self.header.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, c)| {
                        let v = match c {
                            Cell::Num(x) => json!(x),
                            Cell::Text(s) => json!(s),
                        };
                        (k.to_string(), v)
                    })
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut top = Map::new();
        top.insert("config".into(), Value::Object(config));
        if !self.notes.is_empty() {
            top.insert("result".into(), Value::Object(self.notes.iter().cloned().collect()));
        }
        top.insert("columns".into(), json!(self.columns));
        top.insert("rows".into(), Value::Array(rows));
        for (k, v) in &self.json_extra {
            top.insert(k.clone(), v.clone());
        }
        Value::Object(top)
    }
}

fn note_text(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map(|x| format_sig(x, CSV_DIGITS)).unwrap_or_else(|| n.to_string()),
        Value::String(s) => s.clone(),
        Value::Null => "nan".into(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut d = Document::new(vec!["a", "b"]);
        d.header("tau_iso", 0.02);
        d.note("w", json!(0.123456789123));
        d.rows.push(vec![Cell::Num(1.0 / 3.0), Cell::Text("x".into())]);
        assert_eq!(d.render(Format::Csv), "# tau_iso = 0.02\n# result: w = 0.123456789\na,b\n0.333333333,x\n");
    }

    #[test]
    fn empty_table_keeps_header() {
        let d = Document::new(vec!["a", "b"]);
        assert_eq!(d.render(Format::Csv), "a,b\n");
        let v: Value = serde_json::from_str(&d.render(Format::Json)).unwrap();
        assert_eq!(v["rows"], json!([]));
    }

    #[test]
    fn json_rows_are_keyed_and_nan_is_null() {
        let mut d = Document::new(vec!["x", "eta"]);
        d.rows.push(vec![Cell::Num(0.5), Cell::Num(f64::NAN)]);
        let v: Value = serde_json::from_str(&d.render(Format::Json)).unwrap();
        assert_eq!(v["rows"][0]["x"], json!(0.5));
        assert!(v["rows"][0]["eta"].is_null());
    }
}
