//! Naive reference implementations used to check the library. Everything
//! here is computed straight from the textbook definitions, without sharing
//! code with the crate under test.

#![allow(dead_code)]

use clustergrid_core::seed::splitmix64;
use clustergrid_core::Matrix;
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Small deterministic generator for fixtures.
pub struct Stream(u64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        splitmix64(self.0)
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// A random fixture: points in `[-10, 10)^dims` and labels in which every
/// value below `k` occurs at least once.
pub fn random_fixture(stream: &mut Stream, rows: usize, dims: usize, k: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let points = (0..rows)
        .map(|_| (0..dims).map(|_| stream.uniform() * 20.0 - 10.0).collect())
        .collect();
    let mut labels: Vec<usize> = (0..rows).map(|i| if i < k { i } else { stream.below(k) }).collect();
    for i in (1..rows).rev() {
        labels.swap(i, stream.below(i + 1));
    }
    (points, labels)
}

pub fn to_matrix(points: &[Vec<f64>]) -> Matrix {
    Matrix::from_rows(points)
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn mean_point(points: &[&Vec<f64>]) -> Vec<f64> {
    let dims = points[0].len();
    (0..dims)
        .map(|d| points.iter().map(|p| p[d]).sum::<f64>() / points.len() as f64)
        .collect()
}

fn members<'a>(points: &'a [Vec<f64>], labels: &[usize], c: usize) -> Vec<&'a Vec<f64>> {
    points.iter().zip(labels).filter(|(_, &l)| l == c).map(|(p, _)| p).collect()
}

fn distinct(labels: &[usize]) -> Vec<usize> {
    let mut v = labels.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

pub fn silhouette(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let clusters = distinct(labels);
    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        let own = labels[i];
        let mean_to = |c: usize| {
            let others: Vec<f64> = (0..n)
                .filter(|&j| j != i && labels[j] == c)
                .map(|j| dist(&points[i], &points[j]))
                .collect();
            others.iter().sum::<f64>() / others.len() as f64
        };
        if labels.iter().filter(|&&l| l == own).count() == 1 {
            continue;
        }
        let a = mean_to(own);
        let b = clusters.iter().filter(|&&c| c != own).map(|&c| mean_to(c)).fold(f64::INFINITY, f64::min);
        total += (b - a) / a.max(b);
    }
    total / n as f64
}

/// Calinski–Harabasz with the between-cluster scatter taken as T − W.
pub fn calinski_harabasz(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let all: Vec<&Vec<f64>> = points.iter().collect();
    let overall = mean_point(&all);
    let total: f64 = points.iter().map(|p| dist(p, &overall).powi(2)).sum();
    let clusters = distinct(labels);
    let mut within = 0.0;
    for &c in &clusters {
        let m = members(points, labels, c);
        let centre = mean_point(&m);
        within += m.iter().map(|p| dist(p, &centre).powi(2)).sum::<f64>();
    }
    let (n, k) = (points.len() as f64, clusters.len() as f64);
    ((total - within) / (k - 1.0)) / (within / (n - k))
}

pub fn davies_bouldin(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    let clusters = distinct(labels);
    let centres: Vec<Vec<f64>> = clusters.iter().map(|&c| mean_point(&members(points, labels, c))).collect();
    let scatter: Vec<f64> = clusters
        .iter()
        .zip(&centres)
        .map(|(&c, centre)| {
            let m = members(points, labels, c);
            m.iter().map(|p| dist(p, centre)).sum::<f64>() / m.len() as f64
        })
        .collect();
    let k = clusters.len();
    let mut sum = 0.0;
    for i in 0..k {
        let mut worst = f64::NEG_INFINITY;
        for j in 0..k {
            if i != j {
                worst = worst.max((scatter[i] + scatter[j]) / dist(&centres[i], &centres[j]));
            }
        }
        sum += worst;
    }
    sum / k as f64
}

/// Cluster distance recomputed from its definition on every call.
fn linkage_distance(points: &[Vec<f64>], a: &[usize], b: &[usize], linkage: &str) -> f64 {
    let pairs = || a.iter().flat_map(|&i| b.iter().map(move |&j| (i, j)));
    match linkage {
        "single" => pairs().map(|(i, j)| dist(&points[i], &points[j])).fold(f64::INFINITY, f64::min),
        "complete" => pairs().map(|(i, j)| dist(&points[i], &points[j])).fold(0.0, f64::max),
        "average" => pairs().map(|(i, j)| dist(&points[i], &points[j])).sum::<f64>() / (a.len() * b.len()) as f64,
        "ward" => {
            let pa: Vec<&Vec<f64>> = a.iter().map(|&i| &points[i]).collect();
            let pb: Vec<&Vec<f64>> = b.iter().map(|&i| &points[i]).collect();
            let (na, nb) = (a.len() as f64, b.len() as f64);
            (2.0 * na * nb / (na + nb)).sqrt() * dist(&mean_point(&pa), &mean_point(&pb))
        }
        other => panic!("unknown linkage {other}"),
    }
}

/// Quadratic-per-step agglomeration. Returns the merge heights and the
/// partition left at every cluster count, indexed by that count.
pub fn agglomerate(points: &[Vec<f64>], linkage: &str) -> (Vec<f64>, Vec<Vec<usize>>) {
    let n = points.len();
    let mut clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut heights = Vec::new();
    let mut partitions = vec![Vec::new(); n + 1];
    partitions[n] = (0..n).collect();
    while clusters.len() > 1 {
        let mut best = (0, 0, f64::INFINITY);
        for a in 0..clusters.len() {
            for b in (a + 1)..clusters.len() {
                let d = linkage_distance(points, &clusters[a], &clusters[b], linkage);
                if d < best.2 {
                    best = (a, b, d);
                }
            }
        }
        let removed = clusters.remove(best.1);
        clusters[best.0].extend(removed);
        heights.push(best.2);
        let mut labels = vec![0; n];
        for (c, m) in clusters.iter().enumerate() {
            for &i in m {
                labels[i] = c;
            }
        }
        partitions[clusters.len()] = canonical(&labels);
    }
    (heights, partitions)
}

pub fn sse(points: &[Vec<f64>], labels: &[usize]) -> f64 {
    distinct(labels)
        .into_iter()
        .map(|c| {
            let m = members(points, labels, c);
            let centre = mean_point(&m);
            m.iter().map(|p| dist(p, &centre).powi(2)).sum::<f64>()
        })
        .sum()
}

/// Minimum within-cluster sum of squares over every assignment of the rows
/// to `k` labels.
pub fn exhaustive_min_sse(points: &[Vec<f64>], k: usize) -> f64 {
    let n = points.len();
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        best = best.min(sse(points, &labels));
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// Two-sided Student-t tail probability.
pub fn t_two_sided(t: f64, df: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df).expect("valid degrees of freedom");
    2.0 * dist.sf(t.abs())
}

/// Welch statistic and Welch–Satterthwaite degrees of freedom.
pub fn welch_t_df(mean_a: f64, var_a: f64, n_a: usize, mean_b: f64, var_b: f64, n_b: usize) -> (f64, f64) {
    let (sa, sb) = (var_a / n_a as f64, var_b / n_b as f64);
    let t = (mean_a - mean_b) / (sa + sb).sqrt();
    let df = (sa + sb).powi(2) / (sa * sa / (n_a as f64 - 1.0) + sb * sb / (n_b as f64 - 1.0));
    (t, df)
}

/// Relabels by first appearance so equal partitions compare equal.
pub fn canonical(labels: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    labels
        .iter()
        .map(|l| match seen.iter().position(|s| s == l) {
            Some(p) => p,
            None => {
                seen.push(*l);
                seen.len() - 1
            }
        })
        .collect()
}

pub fn same_partition(a: &[usize], b: &[usize]) -> bool {
    canonical(a) == canonical(b)
}

pub fn relative_error(actual: f64, expected: f64) -> f64 {
    if actual == expected {
        return 0.0;
    }
    (actual - expected).abs() / expected.abs().max(f64::MIN_POSITIVE)
}
