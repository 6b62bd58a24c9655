//! Versioned JSON reports and their CSV projection.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl clap::ValueEnum for Format {
    fn value_variants<'a>() -> &'a [Self] {
        &[Format::Json, Format::Csv]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }))
    }
}

#[derive(Debug, Default, Serialize)]
pub struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable_divisor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    pub violations: Vec<String>,
    #[serde(flatten)]
    pub details: Map<String, Value>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub inputs: Map<String, Value>,
    pub records: Vec<Value>,
    pub summary: Summary,
    pub version: &'static str,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            inputs: Map::new(),
            records: Vec::new(),
            summary: Summary::default(),
            version: env!("CARGO_PKG_VERSION"),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.inputs.insert(key.to_string(), to_value(value));
        self
    }

    pub fn record(&mut self, value: impl Serialize) -> &mut Self {
        self.records.push(to_value(value));
        self
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.summary
            .details
            .insert(key.to_string(), to_value(value));
        self
    }

    pub fn violation(&mut self, message: impl Into<String>) -> &mut Self {
        self.summary.violations.push(message.into());
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report is valid JSON");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }

    /// One row per record; columns are the union of record keys in order of
    /// first appearance, nested values kept as JSON text.
    fn to_csv(&self) -> String {
        let mut columns: Vec<String> = Vec::new();
        for r in &self.records {
            if let Value::Object(m) = r {
                for k in m.keys() {
                    if !columns.contains(k) {
                        columns.push(k.clone());
                    }
                }
            }
        }
        if columns.is_empty() && !self.records.is_empty() {
            columns.push("value".into());
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&columns).expect("in-memory write");
        for r in &self.records {
            let row: Vec<String> = match r {
                Value::Object(m) => columns.iter().map(|c| cell(m.get(c))).collect(),
                other => vec![cell(Some(other))],
            };
            w.write_record(&row).expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("CSV of UTF-8 strings")
    }
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::String(s)) => s.clone(),
        Some(other) => other.to_string(),
    }
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

pub fn write_output(text: &str, path: Option<&std::path::Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_takes_the_union_of_keys() {
        let mut r = Report::new("demo");
        r.record(serde_json::json!({"a": 1, "b": "x"}));
        r.record(serde_json::json!({"a": 2, "c": [1, 2]}));
        assert_eq!(r.render(Format::Csv), "a,b,c\n1,x,\n2,,\"[1,2]\"\n");
    }

    #[test]
    fn json_carries_schema_and_version() {
        let text = Report::new("demo").render(Format::Json);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["summary"]["violations"], serde_json::json!([]));
        assert!(v.get("version").is_some());
    }
}
