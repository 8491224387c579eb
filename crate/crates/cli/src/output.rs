//! Result tables and their CSV/JSON emission.
//!
//! The CSV starts with one `#` metadata line carrying the timestamp; the
//! rest of the file (the body) depends only on the inputs.

use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value as Json};

use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Value {
    /// Floats carry 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Value::Float(v) if v.is_nan() => "NaN".into(),
            Value::Float(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Value::Float(v) => format!("{v:.16e}"),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            Value::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Value::Float(v) if v.is_finite() => json!(v),
            Value::Float(_) | Value::Empty => Json::Null,
            Value::Int(v) => json!(v),
            Value::Bool(v) => json!(v),
            Value::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v as i64)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.into())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl<T: Into<Value>> From<Option<T>> for Value {
    fn from(v: Option<T>) -> Self {
        v.map_or(Value::Empty, Into::into)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(command: &str, header: &[&str]) -> Self {
        Self { command: command.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Header plus rows, RFC-4180 quoted.
    pub fn csv_body(&self) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::render))?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn csv(&self) -> CliResult<String> {
        Ok(format!("{}\r\n{}", metadata_line(&self.command), self.csv_body()?))
    }

    pub fn json(&self) -> Json {
        let rows: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (h, v) in self.header.iter().zip(row) {
                    obj.insert(h.clone(), v.to_json());
                }
                Json::Object(obj)
            })
            .collect();
        json!({ "command": self.command, "generated_at": epoch_seconds(), "columns": self.header, "rows": rows })
    }

    /// Writes to the requested files, or the CSV to stdout when no path is given.
    pub fn emit(&self, out: Option<&Path>, json_path: Option<&Path>) -> CliResult<()> {
        match out {
            Some(path) => std::fs::write(path, self.csv()?)?,
            None if json_path.is_none() => std::io::stdout().write_all(self.csv()?.as_bytes())?,
            None => {}
        }
        if let Some(path) = json_path {
            let text = serde_json::to_string_pretty(&self.json()).expect("json values are serializable");
            std::fs::write(path, text + "\n")?;
        }
        Ok(())
    }
}

fn epoch_seconds() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

pub fn metadata_line(command: &str) -> String {
    format!("# ptone {command} generated_at={}", epoch_seconds())
}

/// The body of a CSV produced by [`Table::csv`], metadata lines dropped.
pub fn strip_metadata(csv: &str) -> String {
    csv.split_inclusive('\n').filter(|l| !l.starts_with('#')).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let v = Value::Float(std::f64::consts::PI);
        let text = v.render();
        assert_eq!(text, "3.1415926535897931e0");
        assert_eq!(text.parse::<f64>().unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn quoting_and_metadata() {
        let mut t = Table::new("demo", &["name", "x"]);
        t.push(vec!["a,b \"q\"".into(), 1.0.into()]);
        t.push(vec![Value::Empty, Value::Float(f64::NAN)]);
        let csv = t.csv().unwrap();
        assert!(csv.starts_with("# ptone demo generated_at="));
        let body = strip_metadata(&csv);
        assert_eq!(body, t.csv_body().unwrap());
        assert_eq!(body, "name,x\r\n\"a,b \"\"q\"\"\",1.0000000000000000e0\r\n,NaN\r\n");
    }
}
