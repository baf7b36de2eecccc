//! `manifest.json`: the index of one run's candidates and artifacts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::Algorithm;
use crate::dataset::Scaling;
use crate::error::{Error, Result};
use crate::grid::{DatasetSummary, ParamValue, RunResult, RunSettings};
use crate::metrics::MetricsRecord;
use crate::profiling::GateOutcome;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryFiles {
    pub metrics: String,
    pub significant_features: String,
    pub sizes: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestSettings {
    pub seed: u64,
    #[serde(flatten)]
    pub settings: RunSettings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub candidate_id: String,
    pub config_key: String,
    pub algorithm: Algorithm,
    pub params: BTreeMap<String, ParamValue>,
    pub seed: u64,
    pub scaling: Scaling,
    /// `ok` or `error`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gate: Option<GateOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsRecord>,
    #[serde(default)]
    pub sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_significant_features: Option<usize>,
    pub timing_ms: f64,
    /// Paths relative to the run directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_csv: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chart: Option<String>,
}

impl ManifestEntry {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }

    /// `pass`, `ruled_out` or `error`.
    pub fn gate_label(&self) -> &str {
        self.gate.as_ref().map_or("error", |g| g.status.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub run_id: String,
    pub created_at: String,
    pub dataset: DatasetSummary,
    pub settings: ManifestSettings,
    pub summary: SummaryFiles,
    pub total_ms: f64,
    pub candidates: Vec<ManifestEntry>,
}

/// Identity of a run, supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunMeta {
    pub run_id: String,
    pub created_at: String,
}

fn rel(p: &Path) -> String {
    p.components()
        .map(|c| c.as_os_str().to_string_lossy())
        .collect::<Vec<_>>()
        .join("/")
}

impl RunManifest {
    pub fn build(result: &RunResult, meta: &RunMeta) -> Self {
        let [metrics, significant_features, sizes] = super::csv_out::summary_paths().map(|p| rel(&p));
        let candidates = result
            .candidates
            .iter()
            .map(|c| {
                let id = &c.spec.candidate_id;
                let r = c.results();
                ManifestEntry {
                    candidate_id: id.clone(),
                    config_key: c.spec.config_key.clone(),
                    algorithm: c.spec.algorithm,
                    params: c.spec.params.clone(),
                    seed: c.spec.seed,
                    scaling: c.scaling,
                    status: if r.is_some() { "ok" } else { "error" }.into(),
                    error: c.error().map(str::to_string),
                    gate: r.map(|r| r.gate.clone()),
                    metrics: r.map(|r| r.metrics.clone()),
                    sizes: r.map(|r| r.sizes.clone()).unwrap_or_default(),
                    objective: r.map(|r| r.objective),
                    n_significant_features: r.map(|r| r.profile.n_significant()),
                    timing_ms: c.timing_ms,
                    profile_csv: r.map(|_| rel(&super::csv_out::profile_path(id))),
                    chart: r.map(|_| rel(&super::svg::chart_path(id))),
                }
            })
            .collect();
        RunManifest {
            schema_version: SCHEMA_VERSION,
            run_id: meta.run_id.clone(),
            created_at: meta.created_at.clone(),
            dataset: result.dataset.clone(),
            settings: ManifestSettings {
                seed: result.seed,
                settings: result.settings,
            },
            summary: SummaryFiles {
                metrics,
                significant_features,
                sizes,
            },
            total_ms: result.total_ms,
            candidates,
        }
    }

    /// Reads `<run_dir>/manifest.json`, rejecting unknown schema versions.
    pub fn load(run_dir: &Path) -> Result<Self> {
        let path = run_dir.join(MANIFEST_FILE);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let manifest: RunManifest = serde_json::from_str(&text)?;
        if manifest.schema_version != SCHEMA_VERSION {
            return Err(Error::Schema(format!(
                "{}: schema_version {} is not supported (expected {SCHEMA_VERSION})",
                path.display(),
                manifest.schema_version
            )));
        }
        Ok(manifest)
    }

    /// Every artifact path the manifest references, relative to the run dir.
    pub fn referenced_paths(&self) -> Vec<PathBuf> {
        let mut out: Vec<PathBuf> = [&self.summary.metrics, &self.summary.significant_features, &self.summary.sizes]
            .into_iter()
            .map(PathBuf::from)
            .collect();
        for c in &self.candidates {
            out.extend(c.profile_csv.iter().chain(&c.chart).map(PathBuf::from));
        }
        out
    }

    pub fn candidate(&self, id: &str) -> Option<&ManifestEntry> {
        self.candidates.iter().find(|c| c.candidate_id == id)
    }
}

/// Writes `manifest.json` under `out_dir`.
pub fn write_manifest(result: &RunResult, meta: &RunMeta, out_dir: &Path) -> Result<PathBuf> {
    let manifest = RunManifest::build(result, meta);
    let path = out_dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}
