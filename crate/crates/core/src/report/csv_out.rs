//! Per-candidate profile CSVs and the running summary CSVs.

use std::path::{Path, PathBuf};

use itertools::Itertools;

use super::format::{opt_sig6, sig6};
use crate::error::{Error, Result};
use crate::grid::{CandidateReport, RunResult};

pub const PROFILE_HEADER: [&str; 8] = [
    "cluster_id",
    "cluster_size",
    "feature",
    "cluster_mean",
    "population_mean",
    "z_score",
    "p_value",
    "significant",
];

pub const METRICS_HEADER: [&str; 13] = [
    "candidate_id",
    "algorithm",
    "params",
    "status",
    "silhouette",
    "calinski_harabasz",
    "davies_bouldin",
    "n_clusters",
    "min_size",
    "max_size",
    "n_significant_features",
    "gate_status",
    "gate_reasons",
];

/// Relative location of a candidate's profile CSV.
pub fn profile_path(candidate_id: &str) -> PathBuf {
    Path::new("candidates").join(candidate_id).join("profile.csv")
}

pub(crate) fn create_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    Ok(())
}

fn writer(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    create_parent(path)?;
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

/// Writes `candidates/<id>/profile.csv` under `out_dir` and returns its path.
pub fn write_candidate_csv(report: &CandidateReport, out_dir: &Path) -> Result<PathBuf> {
    let results = report.results().ok_or_else(|| {
        Error::Parameter(format!("{} has no results to write", report.spec.candidate_id))
    })?;
    let path = out_dir.join(profile_path(&report.spec.candidate_id));
    let mut w = writer(&path)?;
    w.write_record(PROFILE_HEADER)?;
    for s in &results.profile.stats {
        w.write_record([
            s.cluster_id.to_string(),
            s.cluster_size.to_string(),
            s.feature.clone(),
            sig6(s.cluster_mean),
            sig6(s.population_mean),
            sig6(s.z_score),
            sig6(s.p_value),
            s.significant.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// The three summary files, in the order metrics, significant features, sizes.
pub fn summary_paths() -> [PathBuf; 3] {
    let dir = Path::new("summary");
    [
        dir.join("metrics.csv"),
        dir.join("significant_features.csv"),
        dir.join("sizes.csv"),
    ]
}

/// Writes the running summaries. Failed candidates keep a row in
/// `metrics.csv` with `status = error` and blank metric cells.
pub fn write_summary_csvs(result: &RunResult, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let paths: Vec<PathBuf> = summary_paths().iter().map(|p| out_dir.join(p)).collect();

    let mut metrics = writer(&paths[0])?;
    metrics.write_record(METRICS_HEADER)?;
    let mut significant = writer(&paths[1])?;
    significant.write_record(["candidate_id", "cluster_id", "feature", "z_score", "p_value"])?;
    let mut sizes = writer(&paths[2])?;
    sizes.write_record(["candidate_id", "cluster_id", "size"])?;

    for c in &result.candidates {
        let id = c.spec.candidate_id.as_str();
        let head = [id.to_string(), c.spec.algorithm.to_string(), c.spec.params_label()];
        let Some(r) = c.results() else {
            let mut row = head.to_vec();
            row.push("error".into());
            row.resize(METRICS_HEADER.len(), String::new());
            metrics.write_record(&row)?;
            continue;
        };

        let mut row = head.to_vec();
        row.extend([
            "ok".to_string(),
            opt_sig6(r.metrics.silhouette),
            opt_sig6(r.metrics.calinski_harabasz),
            opt_sig6(r.metrics.davies_bouldin),
            r.k.to_string(),
            r.sizes.iter().min().copied().unwrap_or(0).to_string(),
            r.sizes.iter().max().copied().unwrap_or(0).to_string(),
            r.profile.n_significant().to_string(),
            r.gate.status.to_string(),
            r.gate.reasons.iter().join(";"),
        ]);
        metrics.write_record(&row)?;

        for s in r.profile.stats.iter().filter(|s| s.significant) {
            significant.write_record([
                id.to_string(),
                s.cluster_id.to_string(),
                s.feature.clone(),
                sig6(s.z_score),
                sig6(s.p_value),
            ])?;
        }
        for (cluster, size) in r.sizes.iter().enumerate() {
            sizes.write_record([id.to_string(), cluster.to_string(), size.to_string()])?;
        }
    }
    for (w, p) in [(&mut metrics, &paths[0]), (&mut significant, &paths[1]), (&mut sizes, &paths[2])] {
        w.flush().map_err(|e| Error::io(p, e))?;
    }
    Ok(paths)
}
