use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "cluster-f2/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A finished command: the JSON document, a flat table for CSV, and whether
/// every checked assertion held.
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub ok: bool,
}

impl Report {
    pub fn new(body: impl Serialize, ok: bool) -> Report {
        Report {
            json: with_schema(body),
            header: Vec::new(),
            rows: Vec::new(),
            ok,
        }
    }

    pub fn table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Report {
        self.header = header;
        self.rows = rows;
        self
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> anyhow::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.json)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// Serializes `body` and adds the top-level schema tag.
pub fn with_schema(body: impl Serialize) -> Value {
    let value = serde_json::to_value(body).expect("reports serialize");
    let mut map = Map::new();
    map.insert("schema".into(), Value::String(SCHEMA.into()));
    match value {
        Value::Object(fields) => map.extend(fields),
        other => {
            map.insert("data".into(), other);
        }
    }
    Value::Object(map)
}

pub fn labels_cell(labels: &[u8]) -> String {
    labels.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
}

pub fn pairs_cell(pairs: &[(usize, usize)]) -> String {
    pairs
        .iter()
        .map(|(i, j)| format!("{i}-{j}"))
        .collect::<Vec<_>>()
        .join(" ")
}
