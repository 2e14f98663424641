use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::error::CliError;

pub const FORMAT_TAG: &str = "radial-disperse v1";

#[derive(Clone, Debug)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    /// Absent value: `none` in CSV, `null` in JSON.
    Missing,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => num(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => "none".into(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => json!(v),
            Cell::Num(_) => Value::Null,
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Missing => Value::Null,
        }
    }
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// One command's output: metadata lines plus a fixed-column table.
pub struct Table {
    pub command: &'static str,
    pub meta: Vec<(&'static str, Cell)>,
    pub columns: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write(&self, format: Format, out: Option<&Path>) -> Result<(), CliError> {
        let mut sink: Box<dyn Write> = match out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        match format {
            Format::Csv => self.write_csv(&mut sink)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut sink, &self.to_json())?;
                writeln!(sink)?;
            }
        }
        sink.flush()?;
        Ok(())
    }

    fn write_csv(&self, sink: &mut dyn Write) -> Result<(), CliError> {
        writeln!(sink, "# {FORMAT_TAG}")?;
        writeln!(sink, "# command: {}", self.command)?;
        for (k, v) in &self.meta {
            writeln!(sink, "# {k}: {}", v.csv())?;
        }
        let mut w = csv::Writer::from_writer(sink);
        w.write_record(self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let meta: Map<String, Value> = self.meta.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect()))
            .collect();
        json!({ "format": FORMAT_TAG, "command": self.command, "metadata": meta, "rows": rows })
    }
}
