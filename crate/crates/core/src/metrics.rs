//! Internal validation indices: silhouette, Calinski–Harabasz, Davies–Bouldin.
//!
//! All three read cluster membership from a label slice. Empty label values
//! are ignored, so `k` here is the number of distinct labels present.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{euclidean, squared_euclidean, Matrix};

/// Internal metrics for one candidate. A metric is `None` when it is
/// undefined or degenerate for the labeling; `notes` says why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub silhouette: Option<f64>,
    /// `+inf` when the within-cluster dispersion is zero.
    #[serde(with = "crate::serde_float")]
    pub calinski_harabasz: Option<f64>,
    pub davies_bouldin: Option<f64>,
    pub cluster_sizes: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl MetricsRecord {
    pub fn compute(data: &Matrix, labels: &[usize], k: usize) -> Self {
        let mut notes = Vec::new();
        let mut keep = |name: &str, r: Result<f64>| match r {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(format!("{name}: {e}"));
                None
            }
        };
        let silhouette = keep("silhouette", silhouette(data, labels));
        let calinski_harabasz = keep("calinski_harabasz", calinski_harabasz(data, labels));
        let davies_bouldin = keep("davies_bouldin", davies_bouldin(data, labels));
        Self {
            silhouette,
            calinski_harabasz,
            davies_bouldin,
            cluster_sizes: crate::algorithms::cluster_sizes(labels, k),
            notes,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.notes.is_empty()
    }
}

/// Row indices grouped by label, empty groups dropped, in label order.
fn groups(labels: &[usize]) -> Vec<Vec<usize>> {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut g = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        g[l].push(i);
    }
    g.retain(|m| !m.is_empty());
    g
}

fn centroid(data: &Matrix, members: &[usize]) -> Vec<f64> {
    let mut c = vec![0.0; data.cols()];
    for &i in members {
        for (s, v) in c.iter_mut().zip(data.row(i)) {
            *s += v;
        }
    }
    let inv = 1.0 / members.len() as f64;
    c.iter_mut().for_each(|s| *s *= inv);
    c
}

fn check_shape(data: &Matrix, labels: &[usize]) -> Result<()> {
    if labels.len() != data.rows() {
        return Err(Error::Parameter(format!(
            "{} labels for {} rows",
            labels.len(),
            data.rows()
        )));
    }
    Ok(())
}

/// Mean silhouette width. Members of singleton clusters score 0.
pub fn silhouette(data: &Matrix, labels: &[usize]) -> Result<f64> {
    check_shape(data, labels)?;
    let groups = groups(labels);
    let k = groups.len();
    if k < 2 {
        return Err(Error::MetricUndefined(format!("silhouette needs >= 2 clusters, got {k}")));
    }
    let mut cluster_of = vec![0usize; data.rows()];
    for (c, members) in groups.iter().enumerate() {
        for &i in members {
            cluster_of[i] = c;
        }
    }

    let n = data.rows();
    let mut sums = vec![0.0f64; k];
    let mut total = 0.0;
    for i in 0..n {
        sums.iter_mut().for_each(|s| *s = 0.0);
        let xi = data.row(i);
        for j in 0..n {
            if j != i {
                sums[cluster_of[j]] += euclidean(xi, data.row(j));
            }
        }
        let own = cluster_of[i];
        let own_size = groups[own].len();
        if own_size == 1 {
            continue;
        }
        let a = sums[own] / (own_size - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own)
            .map(|c| sums[c] / groups[c].len() as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += ((b - a) / denom).clamp(-1.0, 1.0);
        }
    }
    Ok(total / n as f64)
}

/// Ratio of between- to within-cluster dispersion, each divided by its
/// degrees of freedom. Zero within-cluster dispersion yields `+inf`.
pub fn calinski_harabasz(data: &Matrix, labels: &[usize]) -> Result<f64> {
    check_shape(data, labels)?;
    let groups = groups(labels);
    let (n, k) = (data.rows(), groups.len());
    if k < 2 || k + 1 > n {
        return Err(Error::MetricUndefined(format!(
            "Calinski-Harabasz needs 2 <= k <= n - 1, got k = {k}, n = {n}"
        )));
    }
    let all: Vec<usize> = (0..n).collect();
    let overall = centroid(data, &all);
    let mut between = 0.0;
    let mut within = 0.0;
    for members in &groups {
        let c = centroid(data, members);
        between += members.len() as f64 * squared_euclidean(&c, &overall);
        within += members.iter().map(|&i| squared_euclidean(data.row(i), &c)).sum::<f64>();
    }
    if within == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((between / (k - 1) as f64) / (within / (n - k) as f64))
}

/// Mean over clusters of the worst-case scatter-to-separation ratio.
pub fn davies_bouldin(data: &Matrix, labels: &[usize]) -> Result<f64> {
    check_shape(data, labels)?;
    let groups = groups(labels);
    let k = groups.len();
    if k < 2 {
        return Err(Error::MetricUndefined(format!("Davies-Bouldin needs >= 2 clusters, got {k}")));
    }
    let centroids: Vec<Vec<f64>> = groups.iter().map(|m| centroid(data, m)).collect();
    let scatter: Vec<f64> = groups
        .iter()
        .zip(&centroids)
        .map(|(m, c)| m.iter().map(|&i| euclidean(data.row(i), c)).sum::<f64>() / m.len() as f64)
        .collect();

    let mut total = 0.0;
    for i in 0..k {
        let mut worst = 0.0f64;
        for j in 0..k {
            if i == j {
                continue;
            }
            let sep = euclidean(&centroids[i], &centroids[j]);
            if sep == 0.0 {
                return Err(Error::DegenerateMetric(format!(
                    "clusters {i} and {j} have coincident centroids"
                )));
            }
            worst = worst.max((scatter[i] + scatter[j]) / sep);
        }
        total += worst;
    }
    Ok(total / k as f64)
}
