//! `run`, `gate` and `summary`.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use chrono::{SecondsFormat, Utc};
use clustergrid_core::grid::run_specs;
use clustergrid_core::report::{opt_sig6, MANIFEST_FILE};
use clustergrid_core::seed::fnv1a64;
use clustergrid_core::{expand_grid, load_csv, write_run, DecisionsFile, RunConfig, RunManifest, RunMeta, RunResult};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct RunArgs {
    pub config: PathBuf,
    pub out: PathBuf,
    /// Worker threads; all cores when `None`.
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    /// Replace the artifacts of an earlier run in `out`.
    pub force: bool,
}

/// Generated subtrees of a run directory.
const GENERATED: [&str; 3] = ["candidates", "plots", "summary"];

fn prepare_out_dir(out: &Path, force: bool) -> Result<(), CliError> {
    if !out.exists() {
        return std::fs::create_dir_all(out)
            .with_context(|| format!("cannot create {}", out.display()))
            .map_err(CliError::input);
    }
    let mut entries = std::fs::read_dir(out)
        .with_context(|| format!("cannot read {}", out.display()))
        .map_err(CliError::input)?;
    if entries.next().is_none() {
        return Ok(());
    }
    if !force {
        return Err(CliError::input(anyhow!(
            "output directory {} is not empty (use --force to replace an earlier run)",
            out.display()
        )));
    }
    if !out.join(MANIFEST_FILE).exists() {
        return Err(CliError::input(anyhow!(
            "{} is not empty and holds no earlier run; refusing to overwrite it",
            out.display()
        )));
    }
    for sub in GENERATED {
        let p = out.join(sub);
        if p.exists() {
            std::fs::remove_dir_all(&p)
                .with_context(|| format!("cannot clear {}", p.display()))
                .map_err(CliError::runtime)?;
        }
    }
    Ok(())
}

/// Runs the whole grid and writes the output tree. Prints one line per
/// candidate and a final tally to `out`.
pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<RunResult, CliError> {
    let mut config = RunConfig::load(&args.config)
        .with_context(|| format!("cannot load configuration {}", args.config.display()))
        .map_err(CliError::input)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let specs = expand_grid(&config).map_err(CliError::input)?;

    let path = &config.dataset.path;
    let loaded = load_csv(path, config.dataset.drop_na)
        .with_context(|| format!("cannot load dataset {}", path.display()))
        .map_err(CliError::input)?;
    let dataset = match &config.dataset.key_features {
        Some(keys) => loaded.dataset.with_key_features(keys).map_err(CliError::input)?,
        None => loaded.dataset,
    };
    if args.jobs == Some(0) {
        return Err(CliError::input(anyhow!("--jobs must be at least 1")));
    }
    prepare_out_dir(&args.out, args.force)?;

    let mut result =
        run_specs(&dataset, &specs, config.seed, &config.settings(), args.jobs).map_err(CliError::input)?;
    result.dataset.path = Some(path.display().to_string());
    result.dataset.dropped_rows = loaded.dropped_rows;

    let created = Utc::now();
    let config_json = serde_json::to_string(&config).map_err(CliError::runtime)?;
    let meta = RunMeta {
        run_id: format!("{}-{:08x}", created.format("%Y%m%dT%H%M%SZ"), fnv1a64(config_json.as_bytes()) as u32),
        created_at: created.to_rfc3339_opts(SecondsFormat::Secs, true),
    };
    write_run(&result, &meta, &args.out)
        .with_context(|| format!("cannot write results to {}", args.out.display()))
        .map_err(CliError::runtime)?;

    let print = |out: &mut dyn Write| -> std::io::Result<()> {
        if loaded.dropped_rows > 0 {
            writeln!(out, "dropped {} row(s) with missing values", loaded.dropped_rows)?;
        }
        for c in &result.candidates {
            match c.results() {
                Some(r) => writeln!(
                    out,
                    "{:<20} {:<10} silhouette={}",
                    c.spec.candidate_id,
                    r.gate.status,
                    display_metric(r.metrics.silhouette)
                )?,
                None => writeln!(
                    out,
                    "{:<20} {:<10} {}",
                    c.spec.candidate_id,
                    "error",
                    c.error().unwrap_or_default()
                )?,
            }
        }
        writeln!(
            out,
            "{} candidates, {} ruled out by meta-criteria",
            result.candidates.len(),
            result.ruled_out_count()
        )
    };
    print(out).map_err(CliError::runtime)?;
    Ok(result)
}

fn display_metric(v: Option<f64>) -> String {
    match v {
        Some(_) => opt_sig6(v),
        None => "n/a".into(),
    }
}

pub fn load_manifest(run_dir: &Path) -> Result<RunManifest, CliError> {
    RunManifest::load(run_dir)
        .with_context(|| format!("cannot read run manifest in {}", run_dir.display()))
        .map_err(CliError::input)
}

/// Prints every candidate's gate status and reasons.
pub fn cmd_gate(run_dir: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let manifest = load_manifest(run_dir)?;
    let print = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(out, "{:<20} {:<8} {:<10} reasons", "candidate", "algo", "gate")?;
        for c in &manifest.candidates {
            let reasons = match (&c.gate, &c.error) {
                (Some(g), _) => g.reasons.iter().map(|r| r.as_str()).collect::<Vec<_>>().join(", "),
                (None, Some(e)) => e.clone(),
                (None, None) => String::new(),
            };
            writeln!(out, "{:<20} {:<8} {:<10} {}", c.candidate_id, c.algorithm, c.gate_label(), reasons)?;
        }
        let ruled_out = manifest.candidates.iter().filter(|c| c.gate_label() == "ruled_out").count();
        let errors = manifest.candidates.iter().filter(|c| !c.is_ok()).count();
        writeln!(
            out,
            "{} candidates: {} pass, {} ruled_out, {} error",
            manifest.candidates.len(),
            manifest.candidates.len() - ruled_out - errors,
            ruled_out,
            errors
        )
    };
    print(out).map_err(CliError::runtime)
}

/// Prints the internal metrics next to the gate outcome and any triage
/// decision recorded for the run.
pub fn cmd_summary(run_dir: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let manifest = load_manifest(run_dir)?;
    let decisions = DecisionsFile::load(run_dir)
        .with_context(|| format!("cannot read decisions in {}", run_dir.display()))
        .map_err(CliError::input)?;
    let print = |out: &mut dyn Write| -> std::io::Result<()> {
        writeln!(
            out,
            "{:<20} {:<10} {:>10} {:>12} {:>10} {:>6} {:>5} {:<11}",
            "candidate", "gate", "silhouette", "calinski", "davies", "k", "sig", "decision"
        )?;
        for c in &manifest.candidates {
            let m = c.metrics.as_ref();
            let decision = decisions.decisions.get(&c.candidate_id).map(|d| {
                serde_json::to_value(d.status)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default()
            });
            writeln!(
                out,
                "{:<20} {:<10} {:>10} {:>12} {:>10} {:>6} {:>5} {:<11}",
                c.candidate_id,
                c.gate_label(),
                display_metric(m.and_then(|m| m.silhouette)),
                display_metric(m.and_then(|m| m.calinski_harabasz)),
                display_metric(m.and_then(|m| m.davies_bouldin)),
                c.sizes.len(),
                c.n_significant_features.map_or("-".into(), |n| n.to_string()),
                decision.unwrap_or_else(|| "-".into())
            )?;
        }
        Ok(())
    };
    print(out).map_err(CliError::runtime)
}
