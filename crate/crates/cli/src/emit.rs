//! CSV and JSON writers.
//!
//! CSV numbers carry 17 significant digits, enough to recover every `f64`.
//! JSON uses the shortest representation that parses back to the same bits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::Failure;

/// `v` in scientific notation with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(out: Option<&Path>, e: impl std::fmt::Display) -> Failure {
    Failure::io(format!(
        "{}: {e}",
        out.map_or("<stdout>".into(), |p| p.display().to_string())
    ))
}

/// Header row followed by `rows`; a table without rows is header-only.
pub fn write_csv(out: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(header).map_err(|e| io_err(out, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| io_err(out, e))?;
    }
    w.flush().map_err(|e| io_err(out, e))
}

pub fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| io_err(out, e))?;
    writeln!(w)
        .and_then(|_| w.flush())
        .map_err(|e| io_err(out, e))
}
