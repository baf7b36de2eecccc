//! Fixtures shared by the benchmarks in `benches/`.

use clustergrid_core::synthetic::{gaussian_blobs, BlobSpec};
use clustergrid_core::Dataset;

/// Well-separated blobs, `clusters` of them, raw units.
pub fn blobs(rows: usize, dims: usize, clusters: usize) -> Dataset {
    gaussian_blobs(&BlobSpec::well_separated(rows, dims, clusters), 99).0
}

/// Survey-shaped data of the demo's size.
pub fn survey(rows: usize) -> Dataset {
    clustergrid_core::synthetic::survey_like(rows, 20, 9, 2022).0
}
