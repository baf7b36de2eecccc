//! Bottom-up hierarchical clustering with Lance–Williams distance updates.
//!
//! Single, complete and average linkage work on Euclidean distances. Ward
//! works on squared Euclidean distances and reports `sqrt` of the Ward
//! distance as the merge height, which for two singletons is their
//! Euclidean distance.

use super::{check_k, Algorithm, ClusterAssignment, Linkage};
use crate::error::Result;
use crate::matrix::{squared_euclidean, Matrix};

/// One merge step. Cluster ids are the smallest row index in the cluster;
/// `kept < removed` and the merged cluster keeps `kept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub kept: usize,
    pub removed: usize,
    pub height: f64,
    pub size: usize,
}

/// Merges singletons until `k` clusters remain. Ties in the minimum
/// distance go to the lexicographically smallest `(lower id, higher id)`
/// pair. Labels are numbered by first appearance in row order.
pub fn agglomerative(data: &Matrix, k: usize, linkage: Linkage) -> Result<ClusterAssignment> {
    check_k(k, data.rows(), "k")?;
    let (labels, merges) = run(data, k, linkage);
    Ok(ClusterAssignment {
        labels,
        k,
        algorithm: Algorithm::Ahc,
        objective: merges.last().map_or(0.0, |m| m.height),
    })
}

/// The full merge sequence down to a single cluster.
pub fn merge_sequence(data: &Matrix, linkage: Linkage) -> Vec<Merge> {
    run(data, 1, linkage).1
}

fn run(data: &Matrix, k: usize, linkage: Linkage) -> (Vec<usize>, Vec<Merge>) {
    let n = data.rows();
    let ward = linkage == Linkage::Ward;

    let mut dist = vec![0.0f64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d2 = squared_euclidean(data.row(i), data.row(j));
            let d = if ward { d2 } else { d2.sqrt() };
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }

    let mut active: Vec<usize> = (0..n).collect();
    let mut size = vec![1usize; n];
    let mut owner: Vec<usize> = (0..n).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(k));

    while active.len() > k {
        let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
        for (ai, &i) in active.iter().enumerate() {
            let row = &dist[i * n..(i + 1) * n];
            for &j in &active[ai + 1..] {
                if row[j] < best.2 {
                    best = (i, j, row[j]);
                }
            }
        }
        let (i, j, dij) = best;
        let (ni, nj) = (size[i] as f64, size[j] as f64);

        for &m in &active {
            if m == i || m == j {
                continue;
            }
            let (dim, djm) = (dist[i * n + m], dist[j * n + m]);
            let updated = match linkage {
                Linkage::Single => dim.min(djm),
                Linkage::Complete => dim.max(djm),
                Linkage::Average => (ni * dim + nj * djm) / (ni + nj),
                Linkage::Ward => {
                    let nm = size[m] as f64;
                    ((ni + nm) * dim + (nj + nm) * djm - nm * dij) / (ni + nj + nm)
                }
            };
            dist[i * n + m] = updated;
            dist[m * n + i] = updated;
        }

        size[i] += size[j];
        active.retain(|&c| c != j);
        for o in owner.iter_mut().filter(|o| **o == j) {
            *o = i;
        }
        merges.push(Merge {
            kept: i,
            removed: j,
            height: if ward { dij.max(0.0).sqrt() } else { dij },
            size: size[i],
        });
    }

    // `active` is ascending and each id is its cluster's first row.
    let labels = owner
        .iter()
        .map(|o| active.binary_search(o).expect("owner is active"))
        .collect();
    (labels, merges)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn line() -> Matrix {
        Matrix::column_vector(&[0.0, 1.0, 10.0, 11.0, 20.0])
    }

    #[test]
    fn three_groups_on_a_line_for_every_linkage() {
        for linkage in Linkage::ALL {
            let fit = agglomerative(&line(), 3, linkage).unwrap();
            assert_eq!(fit.labels, [0, 0, 1, 1, 2], "{linkage}");
        }
    }

    #[test]
    fn single_linkage_final_height() {
        let fit = agglomerative(&line(), 3, Linkage::Single).unwrap();
        assert_eq!(fit.objective, 1.0);
        let fit = agglomerative(&line(), 2, Linkage::Single).unwrap();
        assert_eq!(fit.labels, [0, 0, 0, 0, 1]);
        assert_eq!(fit.objective, 9.0);
    }

    #[test]
    fn ward_heights_follow_variance_increase() {
        // Two singletons at distance 1 merge at height 1; merging {0,1} with
        // {10,11} raises the SSE by 100, reported as sqrt(2 * 100).
        let merges = merge_sequence(&Matrix::column_vector(&[0.0, 1.0, 10.0, 11.0]), Linkage::Ward);
        assert_eq!(merges.len(), 3);
        assert!((merges[0].height - 1.0).abs() < 1e-12);
        assert!((merges[2].height - 200f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn k_equals_rows_performs_no_merge() {
        let fit = agglomerative(&line(), 5, Linkage::Ward).unwrap();
        assert_eq!(fit.labels, [0, 1, 2, 3, 4]);
        assert_eq!(fit.objective, 0.0);
    }

    #[test]
    fn ties_break_to_smallest_pair() {
        // Equal gaps everywhere: the first merge must be (0, 1).
        let merges = merge_sequence(&Matrix::column_vector(&[0.0, 1.0, 2.0, 3.0]), Linkage::Single);
        assert_eq!((merges[0].kept, merges[0].removed), (0, 1));
        assert_eq!((merges[1].kept, merges[1].removed), (0, 2));
    }

    #[test]
    fn rejects_bad_k() {
        assert!(agglomerative(&line(), 0, Linkage::Ward).is_err());
        assert!(agglomerative(&line(), 6, Linkage::Ward).is_err());
    }

    proptest! {
        #[test]
        fn single_linkage_heights_non_decreasing(v in prop::collection::vec(-10.0f64..10.0, 4..40)) {
            let data = Matrix::from_vec(v.len() / 2, 2, v[..v.len() / 2 * 2].to_vec());
            let merges = merge_sequence(&data, Linkage::Single);
            for w in merges.windows(2) {
                prop_assert!(w[1].height >= w[0].height);
            }
        }

        #[test]
        fn labels_partition_rows(v in prop::collection::vec(-10.0f64..10.0, 3..30), k in 1usize..4) {
            let data = Matrix::column_vector(&v);
            for linkage in Linkage::ALL {
                let fit = agglomerative(&data, k, linkage).unwrap();
                let sizes = fit.sizes();
                prop_assert_eq!(sizes.iter().sum::<usize>(), v.len());
                prop_assert!(sizes.iter().all(|&s| s > 0));
                prop_assert!(fit.objective >= 0.0);
            }
        }
    }
}
