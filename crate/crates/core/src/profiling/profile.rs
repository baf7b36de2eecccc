use serde::{Deserialize, Serialize};

use super::stats::{welch_t_test, SampleSummary};
use crate::dataset::{population_mean_std, Dataset};
use crate::error::{Error, Result};

/// One (cluster, feature) cell of a candidate's profile, in raw units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStat {
    pub cluster_id: usize,
    pub cluster_size: usize,
    pub feature: String,
    pub cluster_mean: f64,
    pub population_mean: f64,
    /// Distance of the cluster mean from the population mean in population
    /// standard deviations; 0 for a constant feature.
    pub z_score: f64,
    pub p_value: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSettings {
    pub alpha: f64,
    /// Divide `alpha` by the number of (cluster, feature) tests.
    pub bonferroni: bool,
}

impl Default for ProfileSettings {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            bonferroni: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    /// Ordered by cluster id, then dataset column order.
    pub stats: Vec<FeatureStat>,
    /// Threshold actually applied to p-values.
    pub effective_alpha: f64,
    /// Clusters whose members or complement were too small to test.
    pub untestable_clusters: Vec<usize>,
}

impl Profile {
    pub fn n_significant(&self) -> usize {
        self.stats.iter().filter(|s| s.significant).count()
    }
}

/// Profiles every nonempty cluster of `labels` against the rest of `raw`.
///
/// p-values come from a two-sided Welch test of cluster members against
/// non-members. Constant features get `z = 0, p = 1`; so does every feature
/// of a cluster whose members or complement number fewer than two.
pub fn profile_clusters(raw: &Dataset, labels: &[usize], k: usize, settings: &ProfileSettings) -> Result<Profile> {
    if !(settings.alpha > 0.0 && settings.alpha < 1.0) {
        return Err(Error::Parameter(format!("alpha must lie in (0, 1), got {}", settings.alpha)));
    }
    if labels.len() != raw.rows() {
        return Err(Error::Parameter(format!("{} labels for {} rows", labels.len(), raw.rows())));
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
        return Err(Error::Parameter(format!("label {bad} out of range for k = {k}")));
    }

    let sizes = crate::algorithms::cluster_sizes(labels, k);
    let nonempty = sizes.iter().filter(|&&s| s > 0).count();
    let effective_alpha = if settings.bonferroni {
        settings.alpha / (nonempty * raw.cols()).max(1) as f64
    } else {
        settings.alpha
    };
    let n = raw.rows();
    let untestable_clusters: Vec<usize> = (0..k)
        .filter(|&c| sizes[c] > 0 && (sizes[c] < 2 || n - sizes[c] < 2))
        .collect();

    let columns: Vec<Vec<f64>> = (0..raw.cols()).map(|j| raw.values().column(j)).collect();
    let population: Vec<(f64, f64, bool)> = columns
        .iter()
        .map(|col| {
            let (mean, std) = population_mean_std(col);
            (mean, std, col.windows(2).all(|w| w[0] == w[1]))
        })
        .collect();

    let mut stats = Vec::with_capacity(nonempty * raw.cols());
    let (mut inside, mut outside) = (Vec::new(), Vec::new());
    for c in (0..k).filter(|&c| sizes[c] > 0) {
        let testable = !untestable_clusters.contains(&c);
        for (j, feature) in raw.columns().iter().enumerate() {
            inside.clear();
            outside.clear();
            for (v, &l) in columns[j].iter().zip(labels) {
                if l == c { inside.push(*v) } else { outside.push(*v) }
            }
            let members = SampleSummary::of(&inside);
            let (pop_mean, pop_std, constant) = population[j];
            let (z_score, p_value) = if constant {
                (0.0, 1.0)
            } else {
                let z = (members.mean - pop_mean) / pop_std;
                let p = if testable {
                    welch_t_test(members, SampleSummary::of(&outside))?
                } else {
                    1.0
                };
                (z, p)
            };
            stats.push(FeatureStat {
                cluster_id: c,
                cluster_size: sizes[c],
                feature: feature.clone(),
                cluster_mean: members.mean,
                population_mean: pop_mean,
                z_score,
                p_value,
                significant: p_value < effective_alpha,
            });
        }
    }
    Ok(Profile {
        stats,
        effective_alpha,
        untestable_clusters,
    })
}
