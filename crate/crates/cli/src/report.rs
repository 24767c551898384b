//! Report envelope: command, input digest, verdicts, optional timing.
//! Without `--timing` the rendered report is byte-identical across runs.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: &'static str,
    pub command: String,
    pub input_digest: String,
    pub verdicts: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: String, input_digest: String, verdicts: Value, timing_ms: Option<u128>) -> Self {
        Report {
            schema_version: crate::document::SCHEMA_VERSION,
            command,
            input_digest,
            verdicts,
            timing_ms,
        }
    }

    pub fn render(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Digest of the raw bytes of the input files, in order. Unreadable files
/// contribute their name only; the read error surfaces elsewhere.
pub fn digest_files(paths: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for p in paths {
        hasher.update(p.as_bytes());
        if let Ok(bytes) = std::fs::read(p) {
            hasher.update(&bytes);
        }
    }
    format!("sha256:{:x}", hasher.finalize())
}

pub fn digest_text(text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    format!("sha256:{:x}", hasher.finalize())
}
