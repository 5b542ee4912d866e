use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: &str = "1";

/// A grid point that produced no row.
#[derive(Debug, Clone, Serialize)]
pub struct RowError {
    pub input: f64,
    pub message: String,
}

/// Table emitted by every subcommand. Undefined cells are `None` and
/// serialize as JSON `null` or an empty CSV field.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub schema_version: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub footer: BTreeMap<String, f64>,
    pub errors: Vec<RowError>,
}

impl OutputRecord {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            parameters: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            footer: BTreeMap::new(),
            errors: Vec::new(),
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    /// Appends a row, turning non-finite cells into row errors.
    pub fn push(&mut self, input: f64, row: Vec<Option<f64>>) {
        debug_assert_eq!(row.len(), self.columns.len());
        if let Some(i) = row.iter().position(|c| c.is_some_and(|x| !x.is_finite())) {
            self.errors.push(RowError {
                input,
                message: format!("non-finite value in column {}", self.columns[i]),
            });
        } else {
            self.rows.push(row);
        }
    }

    pub fn fail(&mut self, input: f64, message: impl ToString) {
        self.errors.push(RowError {
            input,
            message: message.to_string(),
        });
    }

    pub fn write_json<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut out = out;
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    /// A `#` comment line with the schema, command and parameters, the header
    /// and rows, then one `#` line per footer entry.
    pub fn write_csv<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut out = out;
        let mut meta = format!("# schema_version={} command={}", self.schema_version, self.command);
        for (k, v) in &self.parameters {
            let v = match v {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            meta.push_str(&format!(" {k}={v}"));
        }
        writeln!(out, "{meta}")?;
        {
            let mut writer = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            writer.write_record(&self.columns)?;
            for row in &self.rows {
                writer.write_record(row.iter().map(|c| c.map(|x| x.to_string()).unwrap_or_default()))?;
            }
            writer.flush()?;
        }
        for (k, v) in &self.footer {
            writeln!(out, "# {k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_cells_become_row_errors() {
        let mut r = OutputRecord::new("t", &["a", "b"]);
        r.push(1.0, vec![Some(1.0), None]);
        r.push(2.0, vec![Some(f64::NAN), Some(0.0)]);
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].input, 2.0);
    }

    #[test]
    fn csv_layout() {
        let mut r = OutputRecord::new("t", &["a", "b"]);
        r.parameter("group", "u1");
        r.push(1.0, vec![Some(0.5), None]);
        r.footer.insert("norm".into(), 1.0);
        let mut out = Vec::new();
        r.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "# schema_version=1 command=t group=u1\na,b\n0.5,\n# norm=1\n");
    }
}
