//! Content-addressed result cache. An entry holds the rendered output of one
//! invocation, keyed by a digest of the crate version, the subcommand and its
//! parameters; a header line carries the key and a checksum of the payload.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct Header {
    key: String,
    version: String,
    sha256: String,
}

/// Digest of everything that determines an output.
pub fn key(version: &str, subcommand: &str, params: &serde_json::Value, seed: Option<u64>) -> String {
    let canonical = serde_json::json!({
        "version": version,
        "subcommand": subcommand,
        "params": params,
        "seed": seed,
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

pub struct Cache {
    dir: PathBuf,
    version: String,
}

impl Cache {
    pub fn open(dir: &Path, version: &str) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Cache {
            dir: dir.to_path_buf(),
            version: version.to_string(),
        })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.entry"))
    }

    /// The payload stored under `key`. Entries that fail validation are
    /// removed with a warning on standard error.
    pub fn get(&self, key: &str) -> Option<Vec<u8>> {
        let path = self.path(key);
        let bytes = fs::read(&path).ok()?;
        match self.validate(key, &bytes) {
            Some(payload) => Some(payload.to_vec()),
            None => {
                eprintln!("warning: discarding corrupt cache entry {}", path.display());
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    fn validate<'a>(&self, key: &str, bytes: &'a [u8]) -> Option<&'a [u8]> {
        let split = bytes.iter().position(|&b| b == b'\n')?;
        let header: Header = serde_json::from_slice(&bytes[..split]).ok()?;
        let payload = &bytes[split + 1..];
        let ok = header.key == key
            && header.version == self.version
            && header.sha256 == hex::encode(Sha256::digest(payload));
        ok.then_some(payload)
    }

    pub fn put(&self, key: &str, payload: &[u8]) -> io::Result<()> {
        let header = Header {
            key: key.to_string(),
            version: self.version.clone(),
            sha256: hex::encode(Sha256::digest(payload)),
        };
        let mut bytes = serde_json::to_vec(&header).map_err(io::Error::other)?;
        bytes.push(b'\n');
        bytes.extend_from_slice(payload);
        let path = self.path(key);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, &path)
    }
}
