//! Exhaustive grid search over algorithm parameter maps.

mod config;
mod expand;
mod run;

pub use config::{DatasetConfig, ParamGrid, ParamValue, RunConfig, RunSettings};
pub use expand::{expand_grid, AlgorithmParams, CandidateSpec};
pub use run::{
    run_all, run_candidate, run_specs, scaling_for, CandidateOutcome, CandidateReport, CandidateResults,
    DatasetSummary, PreparedData, RunResult,
};
