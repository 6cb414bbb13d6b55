use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use obswave_core::Scalar;
use serde::Serialize;

use crate::error::CliError;

/// Destination of a report: stdout or a file.
pub struct Sink(Option<PathBuf>);

impl Sink {
    pub fn new(path: Option<PathBuf>) -> Self {
        Sink(path)
    }

    fn write_bytes(&self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.0 {
            Some(path) => {
                fs::write(path, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
            }
            None => {
                let mut out = io::stdout().lock();
                out.write_all(bytes).and_then(|_| out.flush()).map_err(CliError::from)
            }
        }
    }

    pub fn json<T: Serialize>(&self, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Invariant(e.to_string()))?;
        text.push('\n');
        self.write_bytes(text.as_bytes())
    }

    /// CSV with an explicit header, so that an empty table still has one.
    pub fn csv<T: Serialize>(&self, header: &[&str], rows: &[T]) -> Result<(), CliError> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        let csv_err = |e: csv::Error| CliError::Invariant(e.to_string());
        w.write_record(header).map_err(csv_err)?;
        for row in rows {
            w.serialize(row).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Invariant(e.to_string()))?;
        self.write_bytes(&bytes)
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

/// A time as an exact string (when available) and a float.
#[derive(Debug, Clone, Serialize)]
pub struct TimeValue {
    pub exact: Option<String>,
    pub float: f64,
}

impl TimeValue {
    pub fn of<S: Scalar>(t: S) -> Self {
        TimeValue {
            exact: t.exact_string(),
            float: t.to_f64(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ArcValue {
    pub from: TimeValue,
    pub to: TimeValue,
    /// Set when the arc crosses the point `0 = 2π`.
    pub wraps: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArcSetValue {
    pub arcs: Vec<ArcValue>,
    pub measure: TimeValue,
}

impl ArcSetValue {
    pub fn of<S: Scalar>(set: &obswave_core::ArcSet<S>) -> Self {
        ArcSetValue {
            arcs: set
                .arcs()
                .into_iter()
                .map(|a| ArcValue {
                    from: TimeValue::of(a.lo),
                    to: TimeValue::of(a.hi),
                    wraps: a.wraps,
                })
                .collect(),
            measure: TimeValue::of(set.measure()),
        }
    }
}
