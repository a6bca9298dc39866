//! Output directory handling: CSV emission with a fixed numeric format,
//! summary JSON, and the run manifest (written last, atomically).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Config;

/// Nine significant digits, locale-independent.
pub fn g9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.8e}")
}

pub struct OutputDir {
    dir: PathBuf,
    files: Vec<(String, String)>, // name, sha256
    started_ms: u128,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
            started_ms: now_ms(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    /// Write a CSV file: header plus preformatted rows.
    pub fn write_csv(&mut self, name: &str, header: &str, rows: &[String]) -> Result<()> {
        let mut body = String::with_capacity(rows.len() * 32 + header.len() + 1);
        body.push_str(header);
        body.push('\n');
        for row in rows {
            body.push_str(row);
            body.push('\n');
        }
        self.write_file(name, body.as_bytes())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write_file(name, text.as_bytes())
    }

    fn write_file(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        let digest = hex::encode(Sha256::digest(bytes));
        self.files.push((name.to_string(), digest));
        Ok(())
    }

    /// Write the manifest last, via a temporary file and rename, so a
    /// missing or partial manifest marks an interrupted run.
    pub fn finish(self, command: &str, config: &Config) -> Result<()> {
        #[derive(Serialize)]
        struct FileEntry<'a> {
            file: &'a str,
            sha256: &'a str,
        }
        #[derive(Serialize)]
        struct Manifest<'a> {
            tool: &'a str,
            version: &'a str,
            command: &'a str,
            config: &'a Config,
            seed: Option<u64>,
            started_unix_ms: u128,
            finished_unix_ms: u128,
            outputs: Vec<FileEntry<'a>>,
        }
        let manifest = Manifest {
            tool: "dupdiff",
            version: env!("CARGO_PKG_VERSION"),
            command,
            config,
            seed: config.seed,
            started_unix_ms: self.started_ms,
            finished_unix_ms: now_ms(),
            outputs: self
                .files
                .iter()
                .map(|(f, d)| FileEntry { file: f, sha256: d })
                .collect(),
        };
        let mut text = serde_json::to_string_pretty(&manifest)?;
        text.push('\n');
        let tmp = self.dir.join("manifest.json.tmp");
        fs::write(&tmp, text.as_bytes())?;
        fs::rename(&tmp, self.dir.join("manifest.json"))?;
        Ok(())
    }
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_has_nine_significant_digits() {
        assert_eq!(g9(6.993302), "6.99330200e0");
        assert_eq!(g9(-0.00012345678949), "-1.23456789e-4");
        assert_eq!(g9(0.0), "0");
    }

    #[test]
    fn manifest_written_last_with_digests() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path()).unwrap();
        out.write_csv("t.csv", "a,b", &["1,2".into()]).unwrap();
        out.finish("curve", &Config::default()).unwrap();
        let manifest = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
        assert!(manifest.contains("t.csv"));
        assert!(manifest.contains("sha256"));
        assert!(!dir.path().join("manifest.json.tmp").exists());
    }
}
