//! Human triage verdicts persisted next to a run as `decisions.json`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::RunManifest;

pub const DECISIONS_FILE: &str = "decisions.json";
pub const DECISIONS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionStatus {
    RuledOut,
    Shortlisted,
    Selected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Decision {
    pub status: DecisionStatus,
    #[serde(default)]
    pub note: String,
    /// RFC 3339; filled in by the server when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub updated_at: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionsFile {
    pub schema_version: u32,
    #[serde(default)]
    pub decisions: BTreeMap<String, Decision>,
}

impl Default for DecisionsFile {
    fn default() -> Self {
        Self {
            schema_version: DECISIONS_SCHEMA_VERSION,
            decisions: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecisionError {
    #[error("malformed decisions document: {0}")]
    Malformed(String),
    #[error("at most one candidate may be selected; selected: {}", .0.join(", "))]
    MultipleSelected(Vec<String>),
}

impl DecisionsFile {
    /// Parses and validates a decisions document. With a manifest, every
    /// candidate id must belong to the run.
    pub fn parse(text: &str, manifest: Option<&RunManifest>) -> Result<Self, DecisionError> {
        let file: DecisionsFile = serde_json::from_str(text).map_err(|e| DecisionError::Malformed(e.to_string()))?;
        file.validate(manifest)?;
        Ok(file)
    }

    pub fn validate(&self, manifest: Option<&RunManifest>) -> Result<(), DecisionError> {
        if self.schema_version != DECISIONS_SCHEMA_VERSION {
            return Err(DecisionError::Malformed(format!(
                "schema_version {} is not supported (expected {DECISIONS_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if let Some(m) = manifest {
            if let Some(id) = self.decisions.keys().find(|id| m.candidate(id).is_none()) {
                return Err(DecisionError::Malformed(format!("unknown candidate id {id:?}")));
            }
        }
        let selected: Vec<String> = self
            .decisions
            .iter()
            .filter(|(_, d)| d.status == DecisionStatus::Selected)
            .map(|(id, _)| id.clone())
            .collect();
        if selected.len() > 1 {
            return Err(DecisionError::MultipleSelected(selected));
        }
        Ok(())
    }

    pub fn path(run_dir: &Path) -> PathBuf {
        run_dir.join(DECISIONS_FILE)
    }

    /// Reads `<run_dir>/decisions.json`; an absent file is an empty document.
    pub fn load(run_dir: &Path) -> std::io::Result<Self> {
        match std::fs::read_to_string(Self::path(run_dir)) {
            Ok(text) => Self::parse(&text, None)
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e.to_string())),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(e),
        }
    }

    /// Writes to a temporary file in `run_dir`, then renames it over
    /// `decisions.json`.
    pub fn save_atomic(&self, run_dir: &Path) -> std::io::Result<()> {
        let target = Self::path(run_dir);
        let tmp = run_dir.join(format!(".{DECISIONS_FILE}.{}.tmp", std::process::id()));
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, &target).inspect_err(|_| {
            let _ = std::fs::remove_file(&tmp);
        })
    }
}
