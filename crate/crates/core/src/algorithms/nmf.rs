//! Nonnegative matrix factorization by Lee–Seung multiplicative updates on
//! the squared Frobenius loss. Rows are clustered by their dominant factor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Algorithm, ClusterAssignment};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NmfParams {
    pub rank: usize,
    pub max_iter: usize,
    /// Stop when the relative decrease of the loss falls to this or below.
    pub tol: f64,
}

impl NmfParams {
    pub const DEFAULT_MAX_ITER: usize = 500;
    pub const DEFAULT_TOL: f64 = 1e-5;

    pub fn new(rank: usize) -> Self {
        Self {
            rank,
            max_iter: Self::DEFAULT_MAX_ITER,
            tol: Self::DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NmfFactors {
    /// rows x rank
    pub w: Matrix,
    /// rank x cols
    pub h: Matrix,
    /// `‖V − WH‖²` after initialization and after every iteration.
    pub trace: Vec<f64>,
}

impl NmfFactors {
    pub fn error(&self) -> f64 {
        *self.trace.last().expect("trace starts with the initial loss")
    }
}

pub fn nmf(data: &Matrix, params: &NmfParams, seed: u64) -> Result<ClusterAssignment> {
    let factors = nmf_factorize(data, params, seed)?;
    let labels = factors.w.iter_rows().map(dominant_factor).collect();
    Ok(ClusterAssignment {
        labels,
        k: params.rank,
        algorithm: Algorithm::Nmf,
        objective: factors.error(),
    })
}

/// Index of the largest entry, lowest index on ties.
fn dominant_factor(row: &[f64]) -> usize {
    row.iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (c, &v)| if v > acc.1 { (c, v) } else { acc })
        .0
}

/// Factors `data ≈ W H`. Initial entries are uniform on (0, 1].
pub fn nmf_factorize(data: &Matrix, params: &NmfParams, seed: u64) -> Result<NmfFactors> {
    let (n, m, r) = (data.rows(), data.cols(), params.rank);
    if let Some(pos) = data.as_slice().iter().position(|&v| v < 0.0) {
        return Err(Error::Domain(format!(
            "NMF input must be nonnegative; cell ({}, {}) is {}",
            pos / m,
            pos % m,
            data.as_slice()[pos]
        )));
    }
    if r == 0 || r > n.min(m) {
        return Err(Error::Parameter(format!(
            "rank = {r} must lie in [1, {}]",
            n.min(m)
        )));
    }
    if params.max_iter == 0 {
        return Err(Error::Parameter("max_iter must be at least 1".into()));
    }
    if !(params.tol >= 0.0) {
        return Err(Error::Parameter(format!("tol must be >= 0, got {}", params.tol)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut uniform = || 1.0 - rng.random::<f64>();
    let mut w = Matrix::from_vec(n, r, (0..n * r).map(|_| uniform()).collect());
    let mut h = Matrix::from_vec(r, m, (0..r * m).map(|_| uniform()).collect());

    let mut trace = vec![loss(data, &w, &h)];
    for _ in 0..params.max_iter {
        update_h(data, &w, &mut h);
        update_w(data, &mut w, &h);
        let prev = *trace.last().unwrap();
        let cur = loss(data, &w, &h);
        trace.push(cur);
        if cur == 0.0 || prev - cur <= params.tol * prev {
            break;
        }
    }
    Ok(NmfFactors { w, h, trace })
}

/// H ← H ∘ (WᵀV) ⊘ (WᵀW H). Entries with a zero denominator are left alone.
fn update_h(v: &Matrix, w: &Matrix, h: &mut Matrix) {
    let (n, m, r) = (v.rows(), v.cols(), w.cols());
    let mut wtv = Matrix::zeros(r, m);
    let mut wtw = Matrix::zeros(r, r);
    for i in 0..n {
        let wi = w.row(i);
        let vi = v.row(i);
        for a in 0..r {
            for j in 0..m {
                wtv.set(a, j, wtv.get(a, j) + wi[a] * vi[j]);
            }
            for b in 0..r {
                wtw.set(a, b, wtw.get(a, b) + wi[a] * wi[b]);
            }
        }
    }
    let old = h.clone();
    for a in 0..r {
        for j in 0..m {
            let den: f64 = (0..r).map(|b| wtw.get(a, b) * old.get(b, j)).sum();
            if den > 0.0 {
                h.set(a, j, old.get(a, j) * wtv.get(a, j) / den);
            }
        }
    }
}

/// W ← W ∘ (VHᵀ) ⊘ (W H Hᵀ).
fn update_w(v: &Matrix, w: &mut Matrix, h: &Matrix) {
    let (n, m, r) = (v.rows(), v.cols(), h.rows());
    let mut hht = Matrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            hht.set(a, b, h.row(a).iter().zip(h.row(b)).map(|(x, y)| x * y).sum());
        }
    }
    let mut num = vec![0.0; r];
    let mut den = vec![0.0; r];
    for i in 0..n {
        let vi = v.row(i);
        for a in 0..r {
            num[a] = (0..m).map(|j| vi[j] * h.get(a, j)).sum();
            den[a] = (0..r).map(|b| w.get(i, b) * hht.get(b, a)).sum();
        }
        let wi = w.row_mut(i);
        for a in 0..r {
            if den[a] > 0.0 {
                wi[a] *= num[a] / den[a];
            }
        }
    }
}

fn loss(v: &Matrix, w: &Matrix, h: &Matrix) -> f64 {
    let r = w.cols();
    let mut total = 0.0;
    for i in 0..v.rows() {
        let wi = w.row(i);
        for (j, &vij) in v.row(i).iter().enumerate() {
            let approx: f64 = (0..r).map(|a| wi[a] * h.get(a, j)).sum();
            total += (vij - approx) * (vij - approx);
        }
    }
    total
}
