//! Machine-readable run reports.
//!
//! Reports serialize deterministically: two runs with the same inputs and
//! flags differ only in `timing_ms`, which is kept as the last field.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Flags left out of the command echo because they do not affect results.
const UNECHOED: [&str; 2] = ["--threads", "--out"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(path: &Path, bytes: &[u8]) -> Self {
        InputDigest {
            path: path.display().to_string(),
            sha256: Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BudgetUsage {
    pub limit: u64,
    /// Candidates enumerated, when the command enumerates any.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub used: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub outputs: Value,
    pub budget: BudgetUsage,
    pub timing_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// The arguments after the program name, without `--threads` and `--out`.
pub fn command_echo(args: &[String]) -> Vec<String> {
    let mut echo = Vec::new();
    let mut rest = args.iter().skip(1);
    while let Some(a) = rest.next() {
        if UNECHOED.contains(&a.as_str()) {
            rest.next();
        } else if !UNECHOED.iter().any(|f| a.starts_with(&format!("{f}="))) {
            echo.push(a.clone());
        }
    }
    echo
}

/// Removes the timing field so reports can be compared byte for byte.
pub fn without_timing(json: &str) -> String {
    json.lines().filter(|l| !l.trim_start().starts_with("\"timing_ms\"")).collect::<Vec<_>>().join("\n")
}
