use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        Self {
            path: path.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Envelope shared by every report file.
#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub format: &'static str,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub wall_time_ms: u64,
    pub result: T,
}

pub const REPORT_FORMAT: &str = "aperiodic-report/1";
