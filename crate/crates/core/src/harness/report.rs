//! Throughput reports and their CSV/JSON serialisation.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "scheme,user,throughput_bps_per_symbol,success_rate,ci_halfwidth";

/// Written at the top of every JSON report.
pub const ACCOUNTING_NOTE: &str = "LPMA throughput is simulated: a user is credited (k/n)*log2(q) \
bits/symbol for each trial whose own level decodes without error. NOMA and OMA throughput is \
evaluated from rate formulas at the drawn channel gains, with success_rate fixed at 1.";

/// `git describe` of the source tree this binary was built from.
pub const GIT_DESCRIBE: &str = env!("LPMA_GIT_DESCRIBE");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub scheme: String,
    /// User id, or `sum` for the per-trial sum over users.
    pub user: String,
    pub throughput_bps_per_symbol: f64,
    pub success_rate: f64,
    pub ci_halfwidth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThroughputReport {
    pub note: &'static str,
    pub git_describe: &'static str,
    pub seed: u64,
    pub trials: u64,
    pub config_digest: String,
    pub config: serde_json::Value,
    pub rows: Vec<ReportRow>,
    /// Fraction of trials whose drawn gains violated NOMA's ratio rule.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noma_degraded_fraction: Option<f64>,
}

impl ThroughputReport {
    pub fn row(&self, scheme: &str, user: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.scheme == scheme && r.user == user)
    }

    pub fn to_csv(&self) -> String {
        rows_to_csv(&self.rows)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report is always serialisable");
        s.push('\n');
        s
    }

    /// Writes `<stem>.csv` and `<stem>.json`; returns both paths.
    pub fn write(&self, stem: &Path) -> Result<(PathBuf, PathBuf)> {
        write_pair(stem, &self.to_csv(), &self.to_json())
    }
}

pub fn rows_to_csv(rows: &[ReportRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            r.scheme, r.user, r.throughput_bps_per_symbol, r.success_rate, r.ci_halfwidth
        )
        .expect("writing to a String cannot fail");
    }
    out
}

pub(crate) fn write_pair(stem: &Path, csv: &str, json: &str) -> Result<(PathBuf, PathBuf)> {
    let csv_path = with_suffix(stem, "csv");
    let json_path = with_suffix(stem, "json");
    if let Some(dir) = stem.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    std::fs::write(&csv_path, csv).map_err(|e| io_error(&csv_path, e))?;
    std::fs::write(&json_path, json).map_err(|e| io_error(&json_path, e))?;
    Ok((csv_path, json_path))
}

fn with_suffix(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Config(format!("{}: {e}", path.display()))
}

/// SHA-256 of the compact JSON form (object keys sorted).
pub fn digest(value: &serde_json::Value) -> String {
    let text = serde_json::to_string(value).expect("json value is always serialisable");
    hex::encode(Sha256::digest(text.as_bytes()))
}
