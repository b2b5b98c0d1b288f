//! Run reports: a JSON record of one invocation for reproducibility.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Everything needed to re-run and compare an invocation. All fields except
/// `elapsed_ms` are deterministic for fixed inputs and seed.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 over the arguments and the contents of every input file.
    pub inputs_sha256: String,
    pub seed: u64,
    pub exit_code: u8,
    pub results: Value,
    pub elapsed_ms: f64,
}

/// Digest of the argument vector followed by each input document, with
/// length prefixes so that boundaries cannot be confused.
pub fn inputs_digest(args: &[String], inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for chunk in args.iter().map(|a| a.as_bytes()).chain(inputs.iter().map(Vec::as_slice)) {
        h.update((chunk.len() as u64).to_le_bytes());
        h.update(chunk);
    }
    hex::encode(h.finalize())
}
