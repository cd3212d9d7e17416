use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::commands::Outcome;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// What a command produced: the report body and its overall verdict.
pub struct Report {
    pub body: String,
    pub summary: String,
    pub outcome: Outcome,
}

/// Rows that can be written as CSV.
pub trait CsvRow {
    const HEADER: &'static str;
    fn write_row(&self, out: &mut String);
}

pub fn csv<R: CsvRow>(rows: &[R]) -> String {
    let mut out = String::from(R::HEADER);
    out.push('\n');
    for r in rows {
        r.write_row(&mut out);
        out.push('\n');
    }
    out
}

pub fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// CSV cell for a float; NaN stays readable, everything else round-trips.
pub fn num(out: &mut String, v: f64) {
    let _ = write!(out, "{v:e}");
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}
