//! Artifact writers: CSV tables, JSON results, and the run manifest.
//!
//! Numbers are written with Rust's shortest round-trip float formatting, so
//! identical inputs produce byte-identical tables.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ConfigError;

/// Collects artifact names while writing them, then closes with a manifest.
pub struct Artifacts {
    dir: PathBuf,
    names: Vec<String>,
}

impl Artifacts {
    pub fn new(dir: &Path) -> Result<Self, ConfigError> {
        std::fs::create_dir_all(dir).map_err(|e| {
            ConfigError(format!("cannot create output directory {}: {e}", dir.display()))
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            names: Vec::new(),
        })
    }

    fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> Result<(), ConfigError> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes)
            .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))?;
        self.names.push(name.to_string());
        Ok(())
    }

    /// CSV with a fixed header; each row formats its cells itself.
    pub fn csv(&mut self, name: &str, header: &str, rows: &[Vec<Option<f64>>]) -> Result<(), ConfigError> {
        let mut buf = Vec::new();
        writeln!(buf, "{header}").unwrap();
        for row in rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| c.map(|v| format!("{v}")).unwrap_or_default())
                .collect();
            writeln!(buf, "{}", cells.join(",")).unwrap();
        }
        self.write_bytes(name, &buf)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), ConfigError> {
        let mut buf = serde_json::to_vec_pretty(value)
            .map_err(|e| ConfigError(format!("cannot serialize {name}: {e}")))?;
        buf.push(b'\n');
        self.write_bytes(name, &buf)
    }

    /// Write `manifest.json` and return the artifact list.
    pub fn finish(
        mut self,
        command: &str,
        config_bytes: &[u8],
        seed: Option<u64>,
        threads: Option<usize>,
        wall_ms: u128,
    ) -> Result<(), ConfigError> {
        #[derive(Serialize)]
        struct Manifest<'a> {
            schema: u32,
            command: &'a str,
            config_sha256: String,
            core_version: &'a str,
            cli_version: &'a str,
            seed: Option<u64>,
            threads: Option<usize>,
            wall_ms: u128,
            artifacts: &'a [String],
        }
        let digest = Sha256::digest(config_bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        let manifest = Manifest {
            schema: 1,
            command,
            config_sha256: hex,
            core_version: wellbound::VERSION,
            cli_version: env!("CARGO_PKG_VERSION"),
            seed,
            threads,
            wall_ms,
            artifacts: &self.names,
        };
        let mut buf = serde_json::to_vec_pretty(&manifest)
            .map_err(|e| ConfigError(format!("cannot serialize manifest: {e}")))?;
        buf.push(b'\n');
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, &buf)
            .map_err(|e| ConfigError(format!("cannot write {}: {e}", path.display())))?;
        self.names.push("manifest.json".into());
        Ok(())
    }
}
