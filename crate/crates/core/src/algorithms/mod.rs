//! Clustering algorithms behind a common "fit, then label every row" contract.

mod agglomerative;
mod kmeans;
mod nmf;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use agglomerative::{agglomerative, merge_sequence, Merge};
pub use kmeans::{kmeans, KmeansParams, KmeansRestart};
pub use nmf::{nmf, nmf_factorize, NmfFactors, NmfParams};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Kmeans,
    Ahc,
    Nmf,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Kmeans, Algorithm::Ahc, Algorithm::Nmf];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Kmeans => "kmeans",
            Algorithm::Ahc => "ahc",
            Algorithm::Nmf => "nmf",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown algorithm {s:?}")))
    }
}

/// Inter-cluster distance rule for agglomerative clustering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linkage {
    Ward,
    Complete,
    Average,
    Single,
}

impl Linkage {
    pub const ALL: [Linkage; 4] = [Linkage::Ward, Linkage::Complete, Linkage::Average, Linkage::Single];

    pub fn as_str(self) -> &'static str {
        match self {
            Linkage::Ward => "ward",
            Linkage::Complete => "complete",
            Linkage::Average => "average",
            Linkage::Single => "single",
        }
    }
}

impl fmt::Display for Linkage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Linkage::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown linkage {s:?}")))
    }
}

/// A labeling of every row into one of `k` clusters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterAssignment {
    pub labels: Vec<usize>,
    pub k: usize,
    pub algorithm: Algorithm,
    /// k-means inertia, AHC final merge height, or NMF squared reconstruction error.
    pub objective: f64,
}

impl ClusterAssignment {
    pub fn sizes(&self) -> Vec<usize> {
        cluster_sizes(&self.labels, self.k)
    }

    pub fn has_empty_cluster(&self) -> bool {
        self.sizes().contains(&0)
    }
}

pub fn cluster_sizes(labels: &[usize], k: usize) -> Vec<usize> {
    let mut sizes = vec![0; k];
    for &l in labels {
        sizes[l] += 1;
    }
    sizes
}

pub(crate) fn check_k(k: usize, rows: usize, what: &str) -> Result<()> {
    if k == 0 {
        return Err(Error::Parameter(format!("{what} must be at least 1")));
    }
    if k > rows {
        return Err(Error::Parameter(format!("{what} = {k} exceeds row count {rows}")));
    }
    Ok(())
}
