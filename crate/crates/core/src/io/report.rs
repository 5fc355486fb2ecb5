//! JSON report files.
//!
//! Every number in `results` is wrapped in a [`Quantity`] or [`Table`] that
//! states how it was obtained. Two runs of the same command and seed produce
//! identical files apart from `timestamp_unix`.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::IntervalEstimate;
use crate::error::Result;

pub const TOOL: &str = "selfsim";

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Quantity {
    /// Computed in closed form or validated exactly.
    Exact {
        value: f64,
    },
    CertifiedInterval {
        lo: f64,
        hi: f64,
    },
    CertifiedUpperBound {
        value: f64,
    },
    LowerBound {
        value: f64,
    },
    /// Observed on samples; no bound implied.
    Sampled {
        value: f64,
    },
}

impl From<IntervalEstimate> for Quantity {
    fn from(e: IntervalEstimate) -> Self {
        if e.lo == e.hi {
            Quantity::Exact { value: e.lo }
        } else {
            Quantity::CertifiedInterval { lo: e.lo, hi: e.hi }
        }
    }
}

/// Sampled rows sharing one set of columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub status: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn sampled(columns: Vec<&'static str>, rows: Vec<Vec<f64>>) -> Self {
        Table { status: "sampled", columns, rows }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: PathBuf,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        Ok(InputDigest { path: path.to_path_buf(), sha256: hex::encode(Sha256::digest(&bytes)) })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportFile<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub timestamp_unix: u64,
    pub exit_code: i32,
    pub results: T,
}

impl<T: Serialize> ReportFile<T> {
    pub fn new(command: Vec<String>, inputs: Vec<InputDigest>, exit_code: i32, results: T) -> Self {
        ReportFile {
            tool: TOOL,
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs,
            timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            exit_code,
            results,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values serialize") + "\n"
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}
