//! Deterministic CSV and JSON record emission.
//!
//! CSV is the primary format: one header row, comma-separated cells, floats
//! at 12 significant digits, `inf` for infinite ratios. JSON mirrors the
//! same records as an array of flat objects with identical field names;
//! infinities become the string `"inf"` since JSON has no number for them.

use std::io::{self, Write};

/// One output cell.
#[derive(Debug, Clone)]
pub enum Value {
    Float(f64),
    Int(u64),
    Text(String),
    Flag(bool),
}

/// One output row: ordered (column, cell) pairs. Every record of a table
/// must carry the same columns in the same order.
#[derive(Debug, Clone)]
pub struct Record {
    pub fields: Vec<(&'static str, Value)>,
}

/// Render a float at 12 significant digits; infinities render as `inf`.
pub fn format_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn csv_cell(value: &Value) -> String {
    match value {
        Value::Float(x) => format_float(*x),
        Value::Int(i) => i.to_string(),
        Value::Text(s) => {
            debug_assert!(!s.contains([',', '"', '\n']), "cell needs quoting: {s}");
            s.clone()
        }
        Value::Flag(b) => b.to_string(),
    }
}

fn json_cell(value: &Value) -> String {
    match value {
        Value::Float(x) if x.is_infinite() => {
            if *x > 0.0 {
                "\"inf\"".into()
            } else {
                "\"-inf\"".into()
            }
        }
        Value::Float(x) => format_float(*x),
        Value::Int(i) => i.to_string(),
        Value::Text(s) => format!("\"{s}\""),
        Value::Flag(b) => b.to_string(),
    }
}

pub fn write_csv(records: &[Record], w: &mut impl Write) -> io::Result<()> {
    let Some(first) = records.first() else {
        return Ok(());
    };
    let header: Vec<&str> = first.fields.iter().map(|(name, _)| *name).collect();
    writeln!(w, "{}", header.join(","))?;
    for record in records {
        let cells: Vec<String> = record.fields.iter().map(|(_, v)| csv_cell(v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

pub fn write_json(records: &[Record], w: &mut impl Write) -> io::Result<()> {
    writeln!(w, "[")?;
    for (i, record) in records.iter().enumerate() {
        let fields: Vec<String> = record
            .fields
            .iter()
            .map(|(name, value)| format!("\"{name}\": {}", json_cell(value)))
            .collect();
        let separator = if i + 1 < records.len() { "," } else { "" };
        writeln!(w, "  {{{}}}{separator}", fields.join(", "))?;
    }
    writeln!(w, "]")
}
