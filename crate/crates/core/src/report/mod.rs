//! Run artifacts: per-candidate profile CSVs and charts, summary CSVs and
//! the manifest.
//!
//! ```text
//! <out_dir>/manifest.json
//! <out_dir>/summary/{metrics.csv, significant_features.csv, sizes.csv}
//! <out_dir>/candidates/<candidate_id>/profile.csv
//! <out_dir>/plots/<candidate_id>.svg
//! ```

mod csv_out;
mod format;
mod manifest;
mod svg;

use std::path::Path;

use rayon::prelude::*;

pub use csv_out::{profile_path, summary_paths, write_candidate_csv, write_summary_csvs, METRICS_HEADER, PROFILE_HEADER};
pub use format::{opt_sig6, sig6};
pub use manifest::{
    write_manifest, ManifestEntry, ManifestSettings, RunManifest, RunMeta, SummaryFiles, MANIFEST_FILE,
    SCHEMA_VERSION,
};
pub use svg::{chart_path, render_zscore_chart, zscore_chart_svg, HEIGHT as CHART_HEIGHT, WIDTH as CHART_WIDTH};

use crate::error::{Error, Result};
use crate::grid::RunResult;

/// Writes the complete output tree. Per-candidate files are written in
/// parallel; summaries and the manifest afterwards. Key features default to
/// every column when the dataset designates none.
pub fn write_run(result: &RunResult, meta: &RunMeta, out_dir: &Path) -> Result<RunManifest> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let key_features = if result.dataset.key_features.is_empty() {
        &result.dataset.columns
    } else {
        &result.dataset.key_features
    };
    result
        .candidates
        .par_iter()
        .filter(|c| c.results().is_some())
        .try_for_each(|c| -> Result<()> {
            write_candidate_csv(c, out_dir)?;
            render_zscore_chart(c, key_features, out_dir)?;
            Ok(())
        })?;
    write_summary_csvs(result, out_dir)?;
    write_manifest(result, meta, out_dir)?;
    Ok(RunManifest::build(result, meta))
}
