//! Lloyd's algorithm with k-means++ seeding and deterministic restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_k, Algorithm, ClusterAssignment};
use crate::error::{Error, Result};
use crate::matrix::{euclidean, squared_euclidean, Matrix};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KmeansParams {
    pub k: usize,
    pub n_init: usize,
    pub max_iter: usize,
    /// Stop once no centroid moves further than this (Euclidean).
    pub tol: f64,
}

impl KmeansParams {
    pub const DEFAULT_N_INIT: usize = 10;
    pub const DEFAULT_MAX_ITER: usize = 300;
    pub const DEFAULT_TOL: f64 = 1e-4;

    pub fn new(k: usize) -> Self {
        Self {
            k,
            n_init: Self::DEFAULT_N_INIT,
            max_iter: Self::DEFAULT_MAX_ITER,
            tol: Self::DEFAULT_TOL,
        }
    }

    fn validate(&self, rows: usize) -> Result<()> {
        check_k(self.k, rows, "k")?;
        if self.n_init == 0 {
            return Err(Error::Parameter("n_init must be at least 1".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::Parameter("max_iter must be at least 1".into()));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::Parameter(format!("tol must be >= 0, got {}", self.tol)));
        }
        Ok(())
    }
}

/// Outcome of one seeded Lloyd run.
#[derive(Debug, Clone)]
pub struct KmeansRestart {
    pub labels: Vec<usize>,
    pub centroids: Matrix,
    /// Sum of squared distances of each row to the mean of its cluster.
    pub inertia: f64,
    /// Inertia after each assignment step, measured against the centroids in
    /// force at that step.
    pub trace: Vec<f64>,
    pub iterations: usize,
}

/// Runs `n_init` restarts and keeps the one with the lowest inertia (the
/// earliest on ties). Restart `r` is seeded from `(seed, r)`.
pub fn kmeans(data: &Matrix, params: &KmeansParams, seed: u64) -> Result<ClusterAssignment> {
    params.validate(data.rows())?;
    let best = restarts(data, params, seed)
        .reduce(|best, r| if r.inertia < best.inertia { r } else { best })
        .expect("n_init >= 1");
    Ok(ClusterAssignment {
        labels: best.labels,
        k: params.k,
        algorithm: Algorithm::Kmeans,
        objective: best.inertia,
    })
}

pub(crate) fn restarts<'a>(
    data: &'a Matrix,
    params: &'a KmeansParams,
    seed: u64,
) -> impl Iterator<Item = KmeansRestart> + 'a {
    (0..params.n_init as u64).map(move |r| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, r));
        lloyd(data, params, &mut rng)
    })
}

fn lloyd(data: &Matrix, params: &KmeansParams, rng: &mut impl Rng) -> KmeansRestart {
    let (n, k) = (data.rows(), params.k);
    if k == n {
        let labels: Vec<usize> = (0..n).collect();
        return KmeansRestart {
            labels,
            centroids: data.clone(),
            inertia: 0.0,
            trace: vec![0.0],
            iterations: 0,
        };
    }

    let mut centroids = plus_plus_init(data, k, rng);
    let mut labels = vec![0usize; n];
    let mut dist2 = vec![0.0f64; n];
    let mut trace = Vec::new();
    let mut iterations = 0;

    for _ in 0..params.max_iter {
        iterations += 1;
        let inertia = assign(data, &mut centroids, &mut labels, &mut dist2);
        trace.push(inertia);
        let updated = cluster_means(data, &labels, k, &centroids);
        let shift = (0..k)
            .map(|c| euclidean(centroids.row(c), updated.row(c)))
            .fold(0.0, f64::max);
        centroids = updated;
        if shift <= params.tol {
            break;
        }
    }

    assign(data, &mut centroids, &mut labels, &mut dist2);
    let inertia = within_sse(data, &labels, k);
    KmeansRestart {
        labels,
        centroids,
        inertia,
        trace,
        iterations,
    }
}

/// k-means++: the first centre uniformly, each further centre with
/// probability proportional to its squared distance to the nearest chosen one.
fn plus_plus_init(data: &Matrix, k: usize, rng: &mut impl Rng) -> Matrix {
    let n = data.rows();
    let mut centroids = Matrix::zeros(k, data.cols());
    let first = rng.random_range(0..n);
    centroids.row_mut(0).copy_from_slice(data.row(first));
    let mut nearest: Vec<f64> = data
        .iter_rows()
        .map(|x| squared_euclidean(x, data.row(first)))
        .collect();

    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            nearest
                .iter()
                .position(|&d| {
                    acc += d;
                    acc > target
                })
                .unwrap_or_else(|| nearest.iter().rposition(|&d| d > 0.0).unwrap_or(n - 1))
        } else {
            rng.random_range(0..n)
        };
        centroids.row_mut(c).copy_from_slice(data.row(pick));
        for (i, d) in nearest.iter_mut().enumerate() {
            *d = d.min(squared_euclidean(data.row(i), data.row(pick)));
        }
    }
    centroids
}

/// Nearest-centroid assignment (ties to the lower index). A cluster left
/// empty is re-seeded at the row farthest from its assigned centroid, taken
/// from a cluster that can spare it. Returns the resulting inertia.
fn assign(data: &Matrix, centroids: &mut Matrix, labels: &mut [usize], dist2: &mut [f64]) -> f64 {
    let k = centroids.rows();
    for (i, x) in data.iter_rows().enumerate() {
        let (best, d) = (0..k)
            .map(|c| (c, squared_euclidean(x, centroids.row(c))))
            .fold((0, f64::INFINITY), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
        labels[i] = best;
        dist2[i] = d;
    }

    let mut sizes = super::cluster_sizes(labels, k);
    for c in 0..k {
        if sizes[c] > 0 {
            continue;
        }
        let donor = (0..labels.len())
            .filter(|&i| sizes[labels[i]] > 1)
            .fold(None, |best: Option<usize>, i| match best {
                Some(b) if dist2[b] >= dist2[i] => Some(b),
                _ => Some(i),
            })
            .expect("k <= rows leaves a cluster with a spare row");
        sizes[labels[donor]] -= 1;
        sizes[c] = 1;
        labels[donor] = c;
        dist2[donor] = 0.0;
        centroids.row_mut(c).copy_from_slice(data.row(donor));
    }
    dist2.iter().sum()
}

/// Cluster means; an empty cluster keeps its previous centroid.
fn cluster_means(data: &Matrix, labels: &[usize], k: usize, previous: &Matrix) -> Matrix {
    let mut sums = Matrix::zeros(k, data.cols());
    let mut counts = vec![0usize; k];
    for (x, &l) in data.iter_rows().zip(labels) {
        counts[l] += 1;
        for (s, v) in sums.row_mut(l).iter_mut().zip(x) {
            *s += v;
        }
    }
    for c in 0..k {
        if counts[c] == 0 {
            sums.row_mut(c).copy_from_slice(previous.row(c));
        } else {
            let inv = 1.0 / counts[c] as f64;
            sums.row_mut(c).iter_mut().for_each(|s| *s *= inv);
        }
    }
    sums
}

/// Sum of squared distances of each row to its own cluster mean.
pub(crate) fn within_sse(data: &Matrix, labels: &[usize], k: usize) -> f64 {
    let means = cluster_means(data, labels, k, &Matrix::zeros(k, data.cols()));
    data.iter_rows()
        .zip(labels)
        .map(|(x, &l)| squared_euclidean(x, means.row(l)))
        .sum()
}
