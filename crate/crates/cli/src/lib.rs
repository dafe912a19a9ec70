//! Front end for `quartic-core`: curve files, canonical JSON and command dispatch.

pub mod args;
pub mod canonical;
pub mod commands;
pub mod curvefile;

use sha2::{Digest, Sha256};

/// First 16 hex digits of SHA-256 over the invocation and every input it read.
pub fn input_hash(invocation: &str, inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    h.update(invocation.as_bytes());
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    let digest = format!("{:x}", h.finalize());
    digest[..16].to_string()
}
