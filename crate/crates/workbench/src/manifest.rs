//! Run manifests: every command that writes artifacts also writes a
//! `manifest.json` capturing the command name, input paths, configuration
//! snapshot, output paths, and timestamps. Structured outputs carry a
//! `manifest` back-reference so each artifact names the run that made it.

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use crate::CommandError;

/// Name of the manifest file inside an output directory.
pub const MANIFEST_FILE: &str = "manifest.json";

/// Everything needed to rerun a command: what ran, on which inputs, with
/// which settings, and what it produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub config: ConfigSnapshot,
    pub outputs: Vec<String>,
    pub started_at: String,
    pub finished_at: String,
}

/// Union of the per-command settings; commands fill the fields they use.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ConfigSnapshot {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_path_length: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strategy: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batch_rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recommendations: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_follow_ups: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_restarts: Option<u32>,
}

/// Incrementally builds a manifest while a command runs, then persists it.
#[derive(Debug)]
pub struct ManifestWriter {
    out_dir: PathBuf,
    manifest: RunManifest,
    started: DateTime<Utc>,
}

impl ManifestWriter {
    /// Starts a manifest for `command`, creating the output directory.
    pub fn begin(
        out_dir: &Path,
        command: &str,
        inputs: &[&Path],
        config: ConfigSnapshot,
    ) -> Result<Self, CommandError> {
        std::fs::create_dir_all(out_dir).map_err(|e| {
            CommandError::Input(format!(
                "cannot create output directory {}: {e}",
                out_dir.display()
            ))
        })?;
        let started = Utc::now();
        Ok(ManifestWriter {
            out_dir: out_dir.to_path_buf(),
            manifest: RunManifest {
                command: command.to_string(),
                inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
                config,
                outputs: Vec::new(),
                started_at: started.to_rfc3339_opts(SecondsFormat::Millis, true),
                finished_at: String::new(),
            },
            started,
        })
    }

    /// The output directory the manifest lives in.
    pub fn out_dir(&self) -> &Path {
        &self.out_dir
    }

    /// Updates the configuration snapshot (for values resolved mid-run,
    /// such as an auto-selected dimension).
    pub fn set_config(&mut self, config: ConfigSnapshot) {
        self.manifest.config = config;
    }

    /// Writes raw text as an output file and records it.
    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf, CommandError> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, text)
            .map_err(|e| CommandError::Input(format!("cannot write {}: {e}", path.display())))?;
        self.manifest.outputs.push(name.to_string());
        Ok(path)
    }

    /// Serializes a document as pretty JSON, adding the `manifest`
    /// back-reference field, and records it as an output.
    pub fn write_json<T: Serialize>(&mut self, name: &str, doc: &T) -> Result<PathBuf, CommandError> {
        let mut value = serde_json::to_value(doc)
            .map_err(|e| CommandError::Input(format!("cannot serialize {name}: {e}")))?;
        if let serde_json::Value::Object(map) = &mut value {
            map.insert(
                "manifest".to_string(),
                serde_json::Value::String(MANIFEST_FILE.to_string()),
            );
        }
        let text = format!("{}\n", serde_json::to_string_pretty(&value).expect("valid json"));
        self.write_text(name, &text)
    }

    /// Stamps the finish time and writes `manifest.json`.
    pub fn finish(mut self) -> Result<RunManifest, CommandError> {
        let finished = Utc::now().max(self.started);
        self.manifest.finished_at = finished.to_rfc3339_opts(SecondsFormat::Millis, true);
        let path = self.out_dir.join(MANIFEST_FILE);
        let text = format!(
            "{}\n",
            serde_json::to_string_pretty(&self.manifest).expect("manifest serializes")
        );
        std::fs::write(&path, text)
            .map_err(|e| CommandError::Input(format!("cannot write {}: {e}", path.display())))?;
        Ok(self.manifest)
    }
}
