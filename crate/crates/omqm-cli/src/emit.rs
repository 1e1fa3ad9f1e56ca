//! Output plumbing: every file lands under the run's output directory via a
//! temp-file-plus-rename, and each run finishes by writing `run-manifest.json`
//! echoing the fully-resolved configuration. Timestamps appear only there.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde_json::{json, Value};

/// Collects written outputs so the manifest can list them.
pub struct RunOutput {
    dir: PathBuf,
    written: Vec<String>,
}

impl RunOutput {
    /// Create (or reuse) the output directory.
    pub fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(RunOutput {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    /// Absolute-ish path of a named output inside the directory.
    pub fn path_of(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// Atomically write one named output file.
    pub fn write(&mut self, name: &str, contents: &str) -> Result<PathBuf> {
        let path = self.dir.join(name);
        write_atomic(&path, contents.as_bytes())?;
        self.written.push(name.to_string());
        Ok(path)
    }

    /// Record a file written through some other API (already in the dir).
    pub fn record(&mut self, name: &str) {
        self.written.push(name.to_string());
    }

    /// Write the run manifest: command name, resolved config, output list,
    /// tool version, and the only timestamp of the whole run.
    pub fn finish(mut self, command: &str, resolved: &BTreeMap<String, Value>) -> Result<PathBuf> {
        let unix_time = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let manifest = json!({
            "command": command,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "unix_time": unix_time,
            "resolved": Value::Object(
                resolved
                    .iter()
                    .map(|(k, v)| (k.clone(), v.clone()))
                    .collect(),
            ),
            "outputs": self.written,
        });
        let text = format!("{}\n", serde_json::to_string_pretty(&manifest)?);
        let path = self.dir.join("run-manifest.json");
        write_atomic(&path, text.as_bytes())?;
        self.written.push("run-manifest.json".to_string());
        Ok(path)
    }
}

/// Write via a temp file in the same directory, then rename into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or("output");
    let tmp = path.with_file_name(format!(".{file_name}.tmp-{}", std::process::id()));
    fs::write(&tmp, contents).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| {
        let _ = fs::remove_file(&tmp);
        format!("cannot move {} into place", path.display())
    })?;
    Ok(())
}
