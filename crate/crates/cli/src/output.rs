use std::io::Write;

use anyhow::Result;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

/// Output of one command: its records and whether its assertions held.
pub struct Report {
    pub records: Vec<Map<String, Value>>,
    pub passed: bool,
}

impl Report {
    pub fn new(records: Vec<Map<String, Value>>, passed: bool) -> Self {
        Report { records, passed }
    }
}

/// Builds an ordered record from `(key, value)` pairs.
#[macro_export]
macro_rules! record {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = serde_json::Map::new();
        $(m.insert($k.to_string(), serde_json::json!($v));)*
        m
    }};
}

/// Rounds to 12 significant digits; non-finite values become null.
pub fn float(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    json!(rounded)
}

pub fn write(
    out: &mut dyn Write,
    format: Format,
    command: &str,
    config: &Value,
    report: &Report,
) -> Result<()> {
    let schema = format!("jmfree/{command}/v{SCHEMA_VERSION}");
    match format {
        Format::Json => {
            let doc = json!({
                "schema": schema,
                "config": config,
                "passed": report.passed,
                "records": report.records,
            });
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(
                out,
                "# schema={schema} passed={} config={}",
                report.passed,
                serde_json::to_string(config)?
            )?;
            let Some(first) = report.records.first() else {
                return Ok(());
            };
            let mut w = csv::Writer::from_writer(out);
            w.write_record(first.keys())?;
            for r in &report.records {
                w.write_record(r.values().map(cell))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => items.iter().map(cell).collect::<Vec<_>>().join(";"),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(float(1.0 / 3.0), json!(0.333333333333));
        assert_eq!(float(2.0), json!(2.0));
        assert_eq!(float(f64::NAN), Value::Null);
    }

    #[test]
    fn csv_layout() {
        let report = Report::new(
            vec![record! {"a" => 1, "b" => "x", "c" => ["1/2", "3"]}],
            true,
        );
        let mut buf = Vec::new();
        write(&mut buf, Format::Csv, "demo", &json!({"k": 1}), &report).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# schema=jmfree/demo/v1 passed=true config={\"k\":1}\na,b,c\n1,x,1/2;3\n"
        );
    }
}
