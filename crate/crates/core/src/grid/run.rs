//! Candidate evaluation and whole-grid orchestration.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{RunConfig, RunSettings};
use super::expand::{expand_grid, AlgorithmParams, CandidateSpec};
use crate::algorithms::{agglomerative, kmeans, nmf, Algorithm, ClusterAssignment};
use crate::dataset::{Dataset, Scaling};
use crate::error::{Error, Result};
use crate::metrics::MetricsRecord;
use crate::profiling::{meta_gate, profile_clusters, GateInput, GateOutcome, Profile, ProfileSettings};

/// Scaling each algorithm family is fitted on.
pub fn scaling_for(algorithm: Algorithm) -> Scaling {
    match algorithm {
        Algorithm::Kmeans | Algorithm::Ahc => Scaling::Standardized,
        Algorithm::Nmf => Scaling::Minmax,
    }
}

/// A raw dataset with its scaled variants computed once and shared by all
/// candidates.
#[derive(Debug, Clone)]
pub struct PreparedData {
    raw: Dataset,
    standardized: Dataset,
    minmax: Dataset,
}

impl PreparedData {
    pub fn new(raw: Dataset) -> Self {
        Self {
            standardized: raw.standardize(),
            minmax: raw.minmax_scale(),
            raw,
        }
    }

    pub fn raw(&self) -> &Dataset {
        &self.raw
    }

    pub fn scaled(&self, scaling: Scaling) -> &Dataset {
        match scaling {
            Scaling::Raw => &self.raw,
            Scaling::Standardized => &self.standardized,
            Scaling::Minmax => &self.minmax,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateResults {
    pub k: usize,
    pub sizes: Vec<usize>,
    pub objective: f64,
    pub metrics: MetricsRecord,
    pub profile: Profile,
    pub gate: GateOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CandidateOutcome {
    #[serde(rename = "ok")]
    Completed(Box<CandidateResults>),
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub spec: CandidateSpec,
    /// Scaling of the matrix the algorithm was fitted on.
    pub scaling: Scaling,
    pub outcome: CandidateOutcome,
    pub timing_ms: f64,
}

impl CandidateReport {
    pub fn results(&self) -> Option<&CandidateResults> {
        match &self.outcome {
            CandidateOutcome::Completed(r) => Some(r),
            CandidateOutcome::Error { .. } => None,
        }
    }

    pub fn error(&self) -> Option<&str> {
        match &self.outcome {
            CandidateOutcome::Completed(_) => None,
            CandidateOutcome::Error { message } => Some(message),
        }
    }

    pub fn is_ruled_out(&self) -> bool {
        self.results().is_some_and(|r| !r.gate.passed())
    }
}

/// Fits one candidate, scores it and applies the gate. Problems specific
/// to the candidate (bad `k`, negative NMF input, ...) end up in the
/// report instead of failing the call.
pub fn run_candidate(data: &PreparedData, spec: &CandidateSpec, settings: &RunSettings) -> CandidateReport {
    let start = Instant::now();
    let scaling = scaling_for(spec.algorithm);
    let outcome = match evaluate(data, spec, scaling, settings) {
        Ok(r) => CandidateOutcome::Completed(Box::new(r)),
        Err(e) => CandidateOutcome::Error { message: e.to_string() },
    };
    CandidateReport {
        spec: spec.clone(),
        scaling,
        outcome,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

fn fit(matrix: &crate::Matrix, spec: &CandidateSpec) -> Result<ClusterAssignment> {
    match spec.algorithm_params()? {
        AlgorithmParams::Kmeans(p) => kmeans(matrix, &p, spec.seed),
        AlgorithmParams::Ahc { k, linkage } => agglomerative(matrix, k, linkage),
        AlgorithmParams::Nmf(p) => nmf(matrix, &p, spec.seed),
    }
}

fn evaluate(data: &PreparedData, spec: &CandidateSpec, scaling: Scaling, settings: &RunSettings) -> Result<CandidateResults> {
    let matrix = data.scaled(scaling).values();
    let assignment = fit(matrix, spec)?;
    let metrics = MetricsRecord::compute(matrix, &assignment.labels, assignment.k);
    let profile = profile_clusters(
        data.raw(),
        &assignment.labels,
        assignment.k,
        &ProfileSettings {
            alpha: settings.alpha,
            bonferroni: settings.bonferroni,
        },
    )?;
    let sizes = assignment.sizes();

    let mut notes = metrics.notes.clone();
    for &c in &profile.untestable_clusters {
        notes.push(format!(
            "cluster {c} has {} member(s); significance test undefined, p-values set to 1",
            sizes[c]
        ));
    }
    let gate = meta_gate(
        GateInput {
            stats: &profile.stats,
            sizes: &sizes,
            rows: data.raw().rows(),
            min_fraction: settings.min_cluster_fraction,
            metric_degenerate: metrics.is_degenerate(),
        },
        notes,
    );
    Ok(CandidateResults {
        k: assignment.k,
        sizes,
        objective: assignment.objective,
        metrics,
        profile,
        gate,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub rows: usize,
    pub columns: Vec<String>,
    #[serde(default)]
    pub dropped_rows: usize,
    pub key_features: Vec<String>,
    pub scaling: BTreeMap<Algorithm, Scaling>,
}

impl DatasetSummary {
    pub fn of(data: &Dataset) -> Self {
        Self {
            path: None,
            rows: data.rows(),
            columns: data.columns().to_vec(),
            dropped_rows: 0,
            key_features: data.key_features().to_vec(),
            scaling: Algorithm::ALL.into_iter().map(|a| (a, scaling_for(a))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    pub settings: RunSettings,
    pub dataset: DatasetSummary,
    /// In expansion order.
    pub candidates: Vec<CandidateReport>,
    pub total_ms: f64,
}

impl RunResult {
    /// Copy with every timing zeroed, for comparing runs.
    pub fn without_timings(&self) -> RunResult {
        let mut r = self.clone();
        r.total_ms = 0.0;
        r.candidates.iter_mut().for_each(|c| c.timing_ms = 0.0);
        r
    }

    pub fn ruled_out_count(&self) -> usize {
        self.candidates.iter().filter(|c| c.is_ruled_out()).count()
    }
}

/// Evaluates every expanded candidate on `jobs` worker threads (all cores
/// when `None`, inline when `Some(1)`). Reports come back in expansion order
/// whatever the execution order.
pub fn run_all(data: &Dataset, config: &RunConfig, jobs: Option<usize>) -> Result<RunResult> {
    let specs = expand_grid(config)?;
    run_specs(data, &specs, config.seed, &config.settings(), jobs)
}

pub fn run_specs(
    data: &Dataset,
    specs: &[CandidateSpec],
    seed: u64,
    settings: &RunSettings,
    jobs: Option<usize>,
) -> Result<RunResult> {
    settings.validate()?;
    let start = Instant::now();
    let prepared = PreparedData::new(data.clone());
    let eval = |spec: &CandidateSpec| run_candidate(&prepared, spec, settings);

    let candidates: Vec<CandidateReport> = match jobs {
        Some(1) => specs.iter().map(eval).collect(),
        _ => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.unwrap_or(0))
                .build()
                .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
            pool.install(|| specs.par_iter().map(eval).collect())
        }
    };

    Ok(RunResult {
        seed,
        settings: *settings,
        dataset: DatasetSummary::of(data),
        candidates,
        total_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
