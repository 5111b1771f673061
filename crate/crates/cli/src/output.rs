//! Rendering of command reports.
//!
//! One invocation produces one [`Report`]: command name, parameters,
//! metadata, and a result table. CSV and JSON renderings carry the
//! same value strings byte for byte — values are formatted once, at
//! report construction, never per format.

use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::Serialize;

/// Output format selector shared by every subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    /// `#`-prefixed preamble, header line, one line per result row.
    Csv,
    /// One pretty-printed record object.
    Json,
}

/// Everything one command invocation reports.
pub struct Report {
    /// Subcommand name.
    pub command: &'static str,
    /// Invocation parameters, in flag order.
    pub parameters: Vec<(String, String)>,
    /// Run metadata: tool version and, where relevant, seed and digits.
    pub metadata: Vec<(String, String)>,
    /// Result column names, in CSV order.
    pub columns: Vec<&'static str>,
    /// Result rows; each row has one value per column.
    pub rows: Vec<Vec<String>>,
}

/// Renders the report in the requested format, trailing newline included.
pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Csv => to_csv(report),
        Format::Json => to_json(report),
    }
}

fn to_csv(report: &Report) -> String {
    let mut out = String::new();
    out.push_str("# command=");
    out.push_str(report.command);
    out.push('\n');
    for (key, value) in report.parameters.iter().chain(&report.metadata) {
        out.push_str(&format!("# {key}={value}\n"));
    }
    out.push_str(&report.columns.join(","));
    out.push('\n');
    for row in &report.rows {
        debug_assert_eq!(row.len(), report.columns.len());
        let fields: Vec<String> = row.iter().map(|v| csv_field(v)).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Minimal CSV quoting: only fields containing a delimiter, quote, or
/// newline are wrapped, so numeric output stays byte-identical to the
/// JSON values.
fn csv_field(value: &str) -> String {
    if value.contains(',') || value.contains('"') || value.contains('\n') {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn to_json(report: &Report) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("report serialization is total");
    out.push('\n');
    out
}

// Hand-rolled serialization keeps JSON keys in report order (serde_json
// maps would sort them).
impl Serialize for Report {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("command", self.command)?;
        map.serialize_entry("parameters", &Pairs(&self.parameters))?;
        map.serialize_entry("results", &Rows { columns: &self.columns, rows: &self.rows })?;
        map.serialize_entry("metadata", &Pairs(&self.metadata))?;
        map.end()
    }
}

struct Pairs<'a>(&'a [(String, String)]);

impl Serialize for Pairs<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (key, value) in self.0 {
            map.serialize_entry(key, value)?;
        }
        map.end()
    }
}

struct Rows<'a> {
    columns: &'a [&'static str],
    rows: &'a [Vec<String>],
}

impl Serialize for Rows<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.rows.len()))?;
        for row in self.rows {
            seq.serialize_element(&Row { columns: self.columns, row })?;
        }
        seq.end()
    }
}

struct Row<'a> {
    columns: &'a [&'static str],
    row: &'a [String],
}

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.columns.len()))?;
        for (column, value) in self.columns.iter().zip(self.row) {
            map.serialize_entry(column, value)?;
        }
        map.end()
    }
}
