//! Append-only, content-addressed certificate store: one JSON file per
//! certificate, named by the SHA-256 of its canonical bytes, so reruns write
//! identical files and audits can re-verify any of them in isolation.

use crate::{CliError, CliResult};
use matchlab_core::cert::Certificate;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct CertStore {
    dir: PathBuf,
}

impl CertStore {
    pub fn open(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(CertStore {
            dir: dir.to_path_buf(),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// Write the certificate if absent; returns the store-relative file
    /// name. Existing files are left untouched (same content by
    /// construction).
    pub fn put(&self, cert: &Certificate) -> CliResult<String> {
        let bytes = cert.canonical_json();
        let digest = Sha256::digest(bytes.as_bytes());
        let mut name = String::with_capacity(69);
        for byte in digest {
            name.push_str(&format!("{byte:02x}"));
        }
        name.push_str(".json");
        let path = self.dir.join(&name);
        if !path.exists() {
            fs::write(&path, bytes)?;
        }
        Ok(name)
    }

    pub fn load(path: &Path) -> CliResult<Certificate> {
        let text = fs::read_to_string(path)?;
        Certificate::from_json(&text).map_err(|e| CliError::CheckFailed(e.to_string()))
    }

    /// All certificate files (content-addressed names only, so report files
    /// sharing the directory are ignored), sorted by name.
    pub fn list(&self) -> CliResult<Vec<PathBuf>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            let is_cert = path.extension().is_some_and(|e| e == "json")
                && path.file_stem().is_some_and(|s| {
                    let s = s.to_string_lossy();
                    s.len() == 64 && s.chars().all(|c| c.is_ascii_hexdigit())
                });
            if is_cert {
                out.push(path);
            }
        }
        out.sort();
        Ok(out)
    }
}
