//! Rendering of results as plain text, JSON or CSV.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sqrtlab_core::experiments::format_real;
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::args::Format;

/// Explicit CSV table of a subcommand; cells are already formatted.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// What a subcommand produced, before rendering.
pub struct Outcome {
    pub seed: Option<u64>,
    /// One JSON object per result record.
    pub results: Vec<Value>,
    pub plain: String,
    /// CSV layout; when absent the result objects are flattened.
    pub table: Option<Table>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn new<T: Serialize>(records: &[T], plain: String) -> Self {
        Outcome {
            seed: None,
            results: records.iter().map(|r| serde_json::to_value(r).expect("records serialize")).collect(),
            plain,
            table: None,
            notes: Vec::new(),
        }
    }

    pub fn seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub subcommand: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub computed_at: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// The JSON document written for every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Document {
    pub meta: Meta,
    pub results: Vec<Value>,
}

/// RFC 3339 time of computation; `SOURCE_DATE_EPOCH` pins it for
/// reproducible builds of output files.
pub fn timestamp() -> String {
    let t = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|s| OffsetDateTime::from_unix_timestamp(s).ok())
        .unwrap_or_else(OffsetDateTime::now_utc);
    t.format(&Rfc3339).expect("valid timestamp formats")
}

pub fn render(outcome: Outcome, format: Format, subcommand: &str, params: Value) -> Vec<u8> {
    match format {
        Format::Plain => {
            let mut s = outcome.plain;
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s.into_bytes()
        }
        Format::Json => {
            let doc = Document {
                meta: Meta {
                    version: sqrtlab_core::VERSION.to_string(),
                    subcommand: subcommand.to_string(),
                    params,
                    seed: outcome.seed,
                    computed_at: timestamp(),
                    notes: outcome.notes,
                },
                results: outcome.results,
            };
            let mut bytes = serde_json::to_vec_pretty(&doc).expect("document serializes");
            bytes.push(b'\n');
            bytes
        }
        Format::Csv => {
            let table = outcome.table.unwrap_or_else(|| flatten(&outcome.results));
            write_csv(&table)
        }
    }
}

fn write_csv(table: &Table) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// A scalar in CSV form: integers verbatim, reals to 12 significant digits.
pub fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (_, Some(i)) => i.to_string(),
            _ => format_real(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        Value::Object(_) => v.to_string(),
    }
}

/// Nested objects become `outer_inner` columns; arrays become one column
/// of `;`-separated values. Columns follow the first record.
fn flatten(results: &[Value]) -> Table {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        match v {
            Value::Object(map) => {
                for (k, inner) in map {
                    let name = if prefix.is_empty() { k.clone() } else { format!("{prefix}_{k}") };
                    walk(&name, inner, out);
                }
            }
            _ => out.push((prefix.to_string(), cell(v))),
        }
    }
    let mut header = Vec::new();
    let mut rows = Vec::new();
    for (i, r) in results.iter().enumerate() {
        let mut fields = Vec::new();
        let wrapped;
        let r = if r.is_object() {
            r
        } else {
            wrapped = Value::Object(Map::from_iter([("value".to_string(), r.clone())]));
            &wrapped
        };
        walk("", r, &mut fields);
        if i == 0 {
            header = fields.iter().map(|f| f.0.clone()).collect();
        }
        rows.push(fields.into_iter().map(|f| f.1).collect());
    }
    Table { header, rows }
}
