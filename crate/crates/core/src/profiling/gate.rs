use std::fmt;

use serde::{Deserialize, Serialize};

use super::FeatureStat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateStatus {
    Pass,
    RuledOut,
}

impl GateStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            GateStatus::Pass => "pass",
            GateStatus::RuledOut => "ruled_out",
        }
    }
}

impl fmt::Display for GateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GateReason {
    NoSignificantFeatures,
    EmptyCluster,
    ClusterBelowMinFraction,
    MetricDegenerate,
}

impl GateReason {
    pub fn as_str(self) -> &'static str {
        match self {
            GateReason::NoSignificantFeatures => "no_significant_features",
            GateReason::EmptyCluster => "empty_cluster",
            GateReason::ClusterBelowMinFraction => "cluster_below_min_fraction",
            GateReason::MetricDegenerate => "metric_degenerate",
        }
    }
}

impl fmt::Display for GateReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

/// `status` is `RuledOut` exactly when `reasons` is nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateOutcome {
    pub status: GateStatus,
    pub reasons: Vec<GateReason>,
    /// Free-text diagnostics (degenerate metrics, untestable clusters).
    #[serde(default)]
    pub notes: Vec<String>,
}

impl GateOutcome {
    pub fn passed(&self) -> bool {
        self.status == GateStatus::Pass
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GateInput<'a> {
    pub stats: &'a [FeatureStat],
    pub sizes: &'a [usize],
    pub rows: usize,
    pub min_fraction: f64,
    pub metric_degenerate: bool,
}

/// Rules a cluster set out when it has no significant feature, an empty
/// cluster, a cluster under `min_fraction` of the rows, or a degenerate
/// internal metric.
pub fn meta_gate(input: GateInput<'_>, notes: Vec<String>) -> GateOutcome {
    let mut reasons = Vec::new();
    if !input.stats.iter().any(|s| s.significant) {
        reasons.push(GateReason::NoSignificantFeatures);
    }
    if input.sizes.contains(&0) {
        reasons.push(GateReason::EmptyCluster);
    }
    let floor = input.min_fraction * input.rows as f64;
    if input.sizes.iter().any(|&s| s > 0 && (s as f64) < floor) {
        reasons.push(GateReason::ClusterBelowMinFraction);
    }
    if input.metric_degenerate {
        reasons.push(GateReason::MetricDegenerate);
    }
    let status = if reasons.is_empty() { GateStatus::Pass } else { GateStatus::RuledOut };
    GateOutcome { status, reasons, notes }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stat(p_value: f64) -> FeatureStat {
        FeatureStat {
            cluster_id: 0,
            cluster_size: 1,
            feature: "f".into(),
            cluster_mean: 0.0,
            population_mean: 0.0,
            z_score: 0.0,
            p_value,
            significant: p_value < 0.05,
        }
    }

    fn gate(stats: &[FeatureStat], sizes: &[usize], rows: usize, degenerate: bool) -> GateOutcome {
        meta_gate(
            GateInput { stats, sizes, rows, min_fraction: 0.05, metric_degenerate: degenerate },
            Vec::new(),
        )
    }

    #[test]
    fn no_significant_features_rules_out() {
        let g = gate(&[stat(1.0), stat(1.0)], &[250, 250], 500, false);
        assert_eq!(g.status, GateStatus::RuledOut);
        assert_eq!(g.reasons, [GateReason::NoSignificantFeatures]);
    }

    #[test]
    fn healthy_candidate_passes() {
        let g = gate(&[stat(0.01), stat(1.0)], &[250, 250], 500, false);
        assert!(g.passed());
        assert!(g.reasons.is_empty());
    }

    #[test]
    fn small_cluster_rules_out() {
        let g = gate(&[stat(0.01)], &[490, 10], 500, false);
        assert_eq!(g.reasons, [GateReason::ClusterBelowMinFraction]);
    }

    #[test]
    fn reasons_accumulate_in_fixed_order() {
        let g = gate(&[stat(0.5)], &[499, 1, 0], 500, true);
        assert_eq!(
            g.reasons,
            [
                GateReason::NoSignificantFeatures,
                GateReason::EmptyCluster,
                GateReason::ClusterBelowMinFraction,
                GateReason::MetricDegenerate
            ]
        );
    }

    #[test]
    fn reason_tags_serialize_verbatim() {
        let g = gate(&[stat(1.0)], &[2, 2], 4, false);
        let json = serde_json::to_string(&g).unwrap();
        assert!(json.contains(r#""status":"ruled_out""#), "{json}");
        assert!(json.contains(r#""reasons":["no_significant_features"]"#), "{json}");
    }
}
