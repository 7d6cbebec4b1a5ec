//! F/G/H files in a cache directory, each next to a `.sha256` of its bytes.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};

use drinfeld_core::algebra::field::FiniteField;
use drinfeld_core::bridge::{self, BridgePolynomials};
use drinfeld_core::Error;

fn io(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("cache directory: {e}"))
}

fn paths(f: &FiniteField, k: usize, dir: &Path) -> (PathBuf, PathBuf) {
    let m: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
    let stem = format!("bridge-p{}-m{}-k{k}", f.p(), m.join("_"));
    (dir.join(format!("{stem}.json")), dir.join(format!("{stem}.sha256")))
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Loads the polynomials when the checksum matches, otherwise rebuilds and rewrites them.
pub fn load_or_build(f: &FiniteField, k: usize, dir: &Path) -> Result<Arc<BridgePolynomials>, Error> {
    let (data, sum) = paths(f, k, dir);
    if let (Ok(bytes), Ok(expected)) = (fs::read(&data), fs::read_to_string(&sum)) {
        if digest(&bytes) == expected.trim() {
            let v: serde_json::Value =
                serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("bridge cache: {e}")))?;
            let b = BridgePolynomials::from_json(f, &v)?;
            eprintln!("cache hit: {}", data.display());
            return Ok(bridge::install(f, b));
        }
        eprintln!("cache checksum mismatch, rebuilding {}", data.display());
    }
    let b = bridge::bridge(f, k);
    fs::create_dir_all(dir).map_err(io)?;
    let bytes = serde_json::to_vec(&b.to_json(f)).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    fs::write(&data, &bytes).map_err(io)?;
    fs::write(&sum, digest(&bytes) + "\n").map_err(io)?;
    Ok(b)
}
