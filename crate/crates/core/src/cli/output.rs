//! CSV rows and run manifests.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::CliError;
use crate::predictive::PriorChoice;
use crate::risk::ExperimentRow;

pub const CSV_HEADER: [&str; 15] = [
    "n1",
    "n2",
    "p",
    "b_mode",
    "b",
    "a",
    "theta",
    "reps",
    "seed",
    "risk_mean",
    "risk_stderr",
    "ref_risk",
    "verdict",
    "margin",
    "error",
];

/// Inputs print in shortest round-trip form, computed values with 17
/// significant digits.
fn computed(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt<T>(x: Option<T>, f: impl Fn(T) -> String) -> String {
    x.map(f).unwrap_or_default()
}

pub(crate) fn rows_to_csv(rows: &[ExperimentRow]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        let b_mode = match r.prior {
            PriorChoice::Reference => "ref",
            PriorChoice::Hierarchical { b_mode, .. } => b_mode.as_str(),
        };
        let verdict = r.verdict.as_ref();
        w.write_record([
            r.config.n1.to_string(),
            r.config.n2.to_string(),
            r.config.p.to_string(),
            b_mode.to_string(),
            opt(r.b, |x| x.to_string()),
            opt(r.a, |x| x.to_string()),
            r.theta.to_string(),
            r.reps.to_string(),
            r.seed.to_string(),
            opt(r.estimate.map(|e| e.mean), computed),
            opt(r.estimate.and_then(|e| e.std_error), computed),
            computed(r.ref_risk),
            opt(verdict, |v| format!("{:?}", v.holds)),
            opt(verdict.and_then(|v| v.margin), computed),
            r.error.clone().unwrap_or_default(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// `<out>.manifest.json`.
pub(crate) fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

/// Provenance written next to every CSV file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    /// UTC, RFC 3339.
    pub timestamp: String,
    /// SHA-256 of the compact JSON serialization of the resolved configuration.
    pub config_digest: String,
}

impl RunManifest {
    pub fn new<C: Serialize>(command: &str, seed: u64, resolved: &C) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config_digest: config_digest(resolved),
        }
    }
}

pub(crate) fn config_digest<C: Serialize>(resolved: &C) -> String {
    let json = serde_json::to_vec(resolved).unwrap_or_else(|_| unreachable!("configurations always serialize"));
    Sha256::digest(&json).iter().map(|b| format!("{b:02x}")).collect()
}
