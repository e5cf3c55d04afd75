use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde_json::{json, Value};

use crate::{Common, Failure, Format};

pub const SCHEMA: u32 = 1;

pub fn sink(common: &Common) -> Result<Box<dyn Write>, Failure> {
    Ok(match &common.out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Report with the schema version, the command and every resolved parameter.
pub fn envelope(command: &str, common: &Common, instance: &str, parameters: Value, result: Value) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "spec": common.spec.display().to_string(),
        "instance": instance,
        "parameters": parameters,
        "result": result,
    })
}

pub fn write_json(common: &Common, report: &Value) -> Result<(), Failure> {
    let mut w = sink(common)?;
    serde_json::to_writer_pretty(&mut w, report).map_err(io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

pub fn write_csv(common: &Common, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink(common)?);
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_err(e: csv::Error) -> Failure {
    Failure::Io(io::Error::other(e.to_string()))
}

/// Emit `report` as JSON, or `table` as CSV when requested.
pub fn emit(common: &Common, report: &Value, table: Option<(&[&str], Vec<Vec<String>>)>) -> Result<(), Failure> {
    match (common.format, table) {
        (Format::Json, _) => write_json(common, report),
        (Format::Csv, Some((h, rows))) => write_csv(common, h, &rows),
        (Format::Csv, None) => Err(Failure::Usage("this command has no CSV form; use --format json".into())),
    }
}

pub fn opt_f64(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}
