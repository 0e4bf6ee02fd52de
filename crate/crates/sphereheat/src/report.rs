//! Serialization of identity reports.
//!
//! Output is a pure function of the reports: floats use the shortest
//! round-trip decimal form and CSV lines end in `\n`.

use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;

use anyhow::{bail, Result};
use serde_json::{Map, Number, Value};
use sphereheat_core::identity_lab::IdentityReport;

pub const CSV_HEADER: &str = "identity,param_string,lhs,rhs,abs_err,rel_err,nodes,pass";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => bail!("unknown format `{other}` (expected json or csv)"),
        }
    }
}

impl Format {
    /// Picks the format from a file extension, defaulting to JSON.
    pub fn from_path(path: &std::path::Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

/// Non-finite values become JSON `null`.
fn json_number(v: f64) -> Value {
    Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn report_to_json(r: &IdentityReport) -> Value {
    let mut params = Map::new();
    for &(name, value) in &r.params {
        // degrees are integers; keep them integral in JSON
        let v = match name {
            "ell" | "n" | "m" => Value::from(value as u64),
            _ => json_number(value),
        };
        params.insert(name.to_owned(), v);
    }
    let mut obj = Map::new();
    obj.insert("identity".into(), Value::String(r.identity.tag().into()));
    obj.insert("params".into(), Value::Object(params));
    obj.insert("lhs".into(), json_number(r.lhs));
    obj.insert("rhs".into(), json_number(r.rhs));
    obj.insert("abs_err".into(), json_number(r.abs_err));
    obj.insert("rel_err".into(), json_number(r.rel_err));
    obj.insert("nodes".into(), Value::from(r.nodes));
    obj.insert("pass".into(), Value::Bool(r.pass));
    Value::Object(obj)
}

pub fn report_to_csv_row(r: &IdentityReport) -> String {
    let mut line = String::new();
    let _ = write!(
        line,
        "{},{},{:?},{:?},{:?},{:?},{},{}",
        r.identity.tag(),
        r.param_string(),
        r.lhs,
        r.rhs,
        r.abs_err,
        r.rel_err,
        r.nodes,
        r.pass
    );
    line
}

/// Writes `reports` in `format`; an empty slice is an error.
pub fn write_report<W: Write>(reports: &[IdentityReport], format: Format, mut out: W) -> Result<()> {
    if reports.is_empty() {
        bail!("no reports to write");
    }
    match format {
        Format::Json => {
            let array = Value::Array(reports.iter().map(report_to_json).collect());
            serde_json::to_writer_pretty(&mut out, &array)?;
            out.write_all(b"\n")?;
        }
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in reports {
                writeln!(out, "{}", report_to_csv_row(r))?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
