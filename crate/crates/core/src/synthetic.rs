//! Seeded synthetic datasets for tests, benchmarks and the demo run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::Dataset;
use crate::matrix::Matrix;

/// Isotropic Gaussian blobs around fixed centres.
#[derive(Debug, Clone, PartialEq)]
pub struct BlobSpec {
    /// One entry per cluster; all of the same dimension.
    pub centers: Vec<Vec<f64>>,
    /// Rows per cluster.
    pub sizes: Vec<usize>,
    pub std: f64,
}

impl BlobSpec {
    /// `clusters` equal-size blobs with unit spread. Centre `c` sits at
    /// `offset + 12` on every dimension `d` with `d % clusters == c` and at
    /// `offset` elsewhere, so every pair of centres is at least 12 apart and
    /// each blob owns a distinct set of high-valued features.
    pub fn well_separated(rows: usize, dims: usize, clusters: usize) -> Self {
        const OFFSET: f64 = 20.0;
        const LIFT: f64 = 12.0;
        assert!(clusters >= 1 && dims >= clusters, "need at least one dimension per cluster");
        let centers = (0..clusters)
            .map(|c| (0..dims).map(|d| if d % clusters == c { OFFSET + LIFT } else { OFFSET }).collect())
            .collect();
        let base = rows / clusters;
        let sizes = (0..clusters).map(|c| base + usize::from(c < rows % clusters)).collect();
        Self { centers, sizes, std: 1.0 }
    }

    pub fn dims(&self) -> usize {
        self.centers.first().map_or(0, Vec::len)
    }

    /// Smallest distance between two centres.
    pub fn min_center_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for (i, a) in self.centers.iter().enumerate() {
            for b in &self.centers[i + 1..] {
                best = best.min(crate::matrix::euclidean(a, b));
            }
        }
        best
    }
}

/// Draws the blobs; rows are grouped by cluster in order. Returns the
/// dataset (columns `f1..fd`) and the generating labels.
pub fn gaussian_blobs(spec: &BlobSpec, seed: u64) -> (Dataset, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, spec.std).expect("finite std");
    let dims = spec.dims();
    let rows: usize = spec.sizes.iter().sum();
    let mut values = Vec::with_capacity(rows * dims);
    let mut labels = Vec::with_capacity(rows);
    for (c, (center, &n)) in spec.centers.iter().zip(&spec.sizes).enumerate() {
        for _ in 0..n {
            values.extend(center.iter().map(|m| m + noise.sample(&mut rng)));
            labels.push(c);
        }
    }
    let columns = (1..=dims).map(|d| format!("f{d}")).collect();
    let data = Dataset::new(columns, Matrix::from_vec(rows, dims, values)).expect("generated data is valid");
    (data, labels)
}

/// Survey-like data: three latent groups of unequal size expressed on the
/// first `informative` columns, the remaining columns pure noise. Values
/// are rounded to two decimals.
pub fn survey_like(rows: usize, cols: usize, informative: usize, seed: u64) -> (Dataset, Vec<usize>) {
    assert!(informative <= cols && rows >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let weights = [0.45, 0.35, 0.20];
    let sizes = [
        (rows as f64 * weights[0]).round() as usize,
        (rows as f64 * weights[1]).round() as usize,
    ];
    let sizes = [sizes[0], sizes[1], rows - sizes[0] - sizes[1]];
    let shift = |group: usize, j: usize| -> f64 {
        match (group, j % 3) {
            (0, 0) => 2.0,
            (1, 1) => 2.0,
            (2, 2) => 2.5,
            (2, 0) => -1.0,
            _ => 0.0,
        }
    };
    let mut values = Vec::with_capacity(rows * cols);
    let mut labels = Vec::with_capacity(rows);
    for (g, &n) in sizes.iter().enumerate() {
        for _ in 0..n {
            for j in 0..cols {
                let mean = 5.0 + if j < informative { shift(g, j) } else { 0.0 };
                let v: f64 = mean + unit.sample(&mut rng);
                values.push((v * 100.0).round() / 100.0);
            }
            labels.push(g);
        }
    }
    let columns = (1..=cols).map(|j| format!("q{j:02}")).collect();
    let data = Dataset::new(columns, Matrix::from_vec(rows, cols, values)).expect("generated data is valid");
    (data, labels)
}
