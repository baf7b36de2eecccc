//! Exhaustive grid search for clustering hyperparameters.
//!
//! A run expands a map of algorithm parameter lists into candidates
//! (`kmeans_v0`, `ahc_v3`, ...), fits each one, scores it with internal
//! validation indices, profiles every cluster against the rest of the data
//! and gates out candidates that fail basic acceptability checks. The
//! [`report`] module turns a run into CSVs, SVG charts and a manifest for
//! human review.

pub mod algorithms;
pub mod dataset;
pub mod decisions;
pub mod error;
pub mod grid;
pub mod matrix;
pub mod metrics;
pub mod profiling;
pub mod report;
mod serde_float;
pub mod seed;
pub mod synthetic;

pub use algorithms::{agglomerative, kmeans, nmf, Algorithm, ClusterAssignment, KmeansParams, Linkage, NmfParams};
pub use dataset::{load_csv, Dataset, LoadedCsv, Scaling};
pub use decisions::{Decision, DecisionError, DecisionStatus, DecisionsFile};
pub use error::{Error, Result};
pub use grid::{
    expand_grid, run_all, run_candidate, CandidateReport, CandidateSpec, PreparedData, RunConfig, RunResult,
    RunSettings,
};
pub use matrix::Matrix;
pub use metrics::{calinski_harabasz, davies_bouldin, silhouette, MetricsRecord};
pub use profiling::{
    meta_gate, profile_clusters, regularized_incomplete_beta, welch_t_test, FeatureStat, GateOutcome, GateReason,
    GateStatus, SampleSummary,
};
pub use report::{write_run, RunManifest, RunMeta};
