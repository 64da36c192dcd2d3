use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use catsim::MetricsRecord;

use crate::CliError;

/// Twelve significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn metric(rec: &MetricsRecord, name: &str) -> f64 {
    match name {
        "R" => rec.visibility,
        "D" => rec.distinguishability,
        "Dalt" => rec.distinguishability_alt,
        "O" => rec.overlap,
        "N" => rec.negativity,
        "RD" => rec.rd(),
        "P" => rec.purity,
        "S" => rec.renyi,
        "F" => rec.fidelity,
        _ => unreachable!("metric names are checked up front"),
    }
}

pub const DEFAULT_METRICS: [&str; 8] = ["R", "D", "O", "N", "RD", "P", "S", "F"];
pub const ALL_METRICS: [&str; 9] = ["R", "D", "Dalt", "O", "N", "RD", "P", "S", "F"];

/// Open `--out`, or stdout when absent.
pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| {
            CliError::Domain(format!("cannot write {}: {e}", p.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

pub fn write_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::Domain(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
