//! Meta-criteria: per-cluster feature statistics, significance tests and the
//! acceptability gate applied before human review.

mod gate;
mod profile;
pub mod stats;

pub use gate::{meta_gate, GateInput, GateOutcome, GateReason, GateStatus};
pub use profile::{profile_clusters, FeatureStat, Profile, ProfileSettings};
pub use stats::{regularized_incomplete_beta, students_t_two_sided, welch, welch_t_test, SampleSummary, WelchTest};
