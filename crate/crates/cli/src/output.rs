//! Record streams: one JSON object per line, or CSV with a header row. Every
//! stream starts with the run manifest.

use chrono::{DateTime, SecondsFormat, Utc};
use num_rational::BigRational;

use crate::args::Format;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    UInt(u64),
    Float(f64),
    Bool(bool),
    Text(String),
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::UInt(v as u64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::UInt(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<&BigRational> for Value {
    fn from(v: &BigRational) -> Self {
        Value::Text(rational_string(v))
    }
}

/// `p/q` in lowest terms, with `q = 1` written out.
pub fn rational_string(v: &BigRational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

/// Seventeen significant digits, which round-trips every `f64`.
pub fn float_string(x: f64) -> String {
    format!("{x:.16e}")
}

impl Value {
    fn json(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::UInt(v) => v.to_string(),
            Value::Float(v) if v.is_finite() => float_string(*v),
            Value::Float(_) => "null".to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("strings serialize"),
        }
    }

    fn csv(&self) -> String {
        match self {
            Value::Float(v) if v.is_finite() => float_string(*v),
            Value::Float(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            other => other.json(),
        }
    }
}

/// Ordered key/value pairs; the first field is always `record`, the kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    fields: Vec<(String, Value)>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Self {
            fields: vec![("record".to_string(), Value::from(kind))],
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    fn to_json(&self) -> String {
        let body: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("keys serialize"), v.json()))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}

#[derive(Debug, Clone)]
pub struct Manifest {
    pub command: String,
    pub parameters: Vec<(String, Value)>,
    pub seed: u64,
    pub chunk: usize,
    pub started: DateTime<Utc>,
    pub finished: DateTime<Utc>,
    pub tool_version: String,
}

impl Manifest {
    fn to_json(&self) -> String {
        let params = Record {
            fields: self.parameters.clone(),
        }
        .to_json();
        let stamp = |t: &DateTime<Utc>| t.to_rfc3339_opts(SecondsFormat::Micros, true);
        format!(
            "{{\"record\":\"manifest\",\"command\":{},\"parameters\":{},\"seed\":{},\"chunk\":{},\"started\":\"{}\",\"finished\":\"{}\",\"tool_version\":{}}}",
            serde_json::to_string(&self.command).expect("strings serialize"),
            params,
            self.seed,
            self.chunk,
            stamp(&self.started),
            stamp(&self.finished),
            serde_json::to_string(&self.tool_version).expect("strings serialize"),
        )
    }
}

/// Renders the manifest and records as newline-terminated UTF-8 text.
pub fn render(format: Format, manifest: &Manifest, records: &[Record]) -> String {
    match format {
        Format::Json => {
            let mut out = manifest.to_json();
            out.push('\n');
            for r in records {
                out.push_str(&r.to_json());
                out.push('\n');
            }
            out
        }
        Format::Csv => {
            let mut out = format!("# manifest {}\n", manifest.to_json());
            if records.is_empty() {
                return out;
            }
            let mut header: Vec<&str> = Vec::new();
            for r in records {
                for (k, _) in &r.fields {
                    if !header.contains(&k.as_str()) {
                        header.push(k);
                    }
                }
            }
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
            w.write_record(&header).expect("in-memory write");
            for r in records {
                let row: Vec<String> = header
                    .iter()
                    .map(|h| r.get(h).map(Value::csv).unwrap_or_default())
                    .collect();
                w.write_record(&row).expect("in-memory write");
            }
            out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input"));
            out
        }
    }
}
