//! Versioned JSON cache of q-expansions, stored next to the output and keyed
//! by a hash of the algebra conventions.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kmseries::{eigenform, QExpansion};
use crate::octonion::conventions;

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_FILE: &str = "ekm-cache.json";

/// SHA-256 of the serialized multiplication table and order basis.
pub fn conventions_hash() -> String {
    let json = serde_json::to_string(&conventions()).expect("conventions serialize");
    Sha256::digest(json.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct Cache {
    pub version: u32,
    pub conventions: String,
    /// Eigenform weight to decimal coefficients `a(0..)`.
    pub qexp: BTreeMap<u32, Vec<String>>,
}

impl Cache {
    pub fn path_for(out: &Path) -> PathBuf {
        out.parent().unwrap_or_else(|| Path::new(".")).join(CACHE_FILE)
    }

    /// Reads a cache, discarding it when the version or conventions differ.
    pub fn load(path: &Path) -> Self {
        let fresh = Cache {
            version: CACHE_VERSION,
            conventions: conventions_hash(),
            qexp: BTreeMap::new(),
        };
        let Ok(text) = std::fs::read_to_string(path) else { return fresh };
        match serde_json::from_str::<Cache>(&text) {
            Ok(c) if c.version == fresh.version && c.conventions == fresh.conventions => c,
            _ => fresh,
        }
    }

    pub fn store(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    /// Cached eigenform truncated to `max_n`, computing and recording it on a miss.
    pub fn eigenform(&mut self, weight: u32, max_n: usize) -> Result<QExpansion> {
        if let Some(stored) = self.qexp.get(&weight).filter(|v| v.len() > max_n) {
            let coeffs = stored[..=max_n]
                .iter()
                .map(|s| s.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            return Ok(QExpansion::from_coeffs(weight, coeffs));
        }
        let f = eigenform(weight, max_n)?;
        self.qexp.insert(weight, f.coeffs().iter().map(BigInt::to_string).collect());
        Ok(f)
    }
}
