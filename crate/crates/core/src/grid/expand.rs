//! Expansion of parameter maps into uniquely identified candidates.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::config::{ParamValue, RunConfig};
use crate::algorithms::{Algorithm, KmeansParams, Linkage, NmfParams};
use crate::error::{Error, Result};
use crate::seed::candidate_seed;

/// One algorithm with one concrete parameter assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSpec {
    /// `<config key>_v<index>`, e.g. `kmeans_v0`.
    pub candidate_id: String,
    pub config_key: String,
    pub algorithm: Algorithm,
    /// Every parameter the algorithm uses, defaults included.
    pub params: BTreeMap<String, ParamValue>,
    pub seed: u64,
}

/// Typed parameters for one fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlgorithmParams {
    Kmeans(KmeansParams),
    Ahc { k: usize, linkage: Linkage },
    Nmf(NmfParams),
}

impl AlgorithmParams {
    pub fn clusters(&self) -> usize {
        match self {
            AlgorithmParams::Kmeans(p) => p.k,
            AlgorithmParams::Ahc { k, .. } => *k,
            AlgorithmParams::Nmf(p) => p.rank,
        }
    }
}

fn allowed(algorithm: Algorithm) -> &'static [&'static str] {
    match algorithm {
        Algorithm::Kmeans => &["k", "max_iter", "n_init", "tol"],
        Algorithm::Ahc => &["k", "linkage"],
        Algorithm::Nmf => &["max_iter", "rank", "tol"],
    }
}

fn defaults(algorithm: Algorithm) -> Vec<(&'static str, ParamValue)> {
    match algorithm {
        Algorithm::Kmeans => vec![
            ("n_init", ParamValue::Int(KmeansParams::DEFAULT_N_INIT as i64)),
            ("max_iter", ParamValue::Int(KmeansParams::DEFAULT_MAX_ITER as i64)),
            ("tol", ParamValue::Float(KmeansParams::DEFAULT_TOL)),
        ],
        Algorithm::Ahc => vec![],
        Algorithm::Nmf => vec![
            ("max_iter", ParamValue::Int(NmfParams::DEFAULT_MAX_ITER as i64)),
            ("tol", ParamValue::Float(NmfParams::DEFAULT_TOL)),
        ],
    }
}

impl CandidateSpec {
    /// Typed view of `params`. Fails on missing or ill-typed values; range
    /// checks against the data happen when the candidate runs.
    pub fn algorithm_params(&self) -> Result<AlgorithmParams> {
        let id = &self.candidate_id;
        let get = |name: &str| {
            self.params
                .get(name)
                .ok_or_else(|| Error::Config(format!("{id}: missing required parameter {name:?}")))
        };
        let count = |name: &str| -> Result<usize> {
            let v = get(name)?;
            v.as_count()
                .and_then(|c| usize::try_from(c).ok())
                .ok_or_else(|| Error::Config(format!("{id}: {name} must be a nonnegative integer, got {v}")))
        };
        let real = |name: &str| -> Result<f64> {
            let v = get(name)?;
            v.as_real()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Config(format!("{id}: {name} must be a number, got {v}")))
        };
        Ok(match self.algorithm {
            Algorithm::Kmeans => AlgorithmParams::Kmeans(KmeansParams {
                k: count("k")?,
                n_init: count("n_init")?,
                max_iter: count("max_iter")?,
                tol: real("tol")?,
            }),
            Algorithm::Ahc => {
                let linkage = match get("linkage")? {
                    ParamValue::Text(s) => s.parse().map_err(|_| {
                        Error::Config(format!("{id}: unknown linkage {s:?} (ward, complete, average, single)"))
                    })?,
                    other => return Err(Error::Config(format!("{id}: linkage must be a string, got {other}"))),
                };
                AlgorithmParams::Ahc { k: count("k")?, linkage }
            }
            Algorithm::Nmf => AlgorithmParams::Nmf(NmfParams {
                rank: count("rank")?,
                max_iter: count("max_iter")?,
                tol: real("tol")?,
            }),
        })
    }

    /// `k=3;linkage=ward`, parameters in name order.
    pub fn params_label(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).join(";")
    }
}

fn resolve_algorithm(key: &str, explicit: Option<&str>) -> Result<Algorithm> {
    if let Some(name) = explicit {
        return name
            .parse()
            .map_err(|_| Error::Config(format!("{key}: unknown algorithm {name:?} (kmeans, ahc, nmf)")));
    }
    Algorithm::ALL
        .into_iter()
        .find(|a| key == a.as_str() || key.strip_prefix(a.as_str()).is_some_and(|rest| rest.starts_with('_')))
        .ok_or_else(|| {
            Error::Config(format!(
                "{key}: unknown algorithm; name the key kmeans/ahc/nmf (optionally with a _suffix) or set \"algorithm\""
            ))
        })
}

/// Cartesian product of each key's parameter lists. Names iterate in
/// lexicographic order (the last name varies fastest), values in listed
/// order; indices count from 0 within each key.
pub fn expand_grid(config: &RunConfig) -> Result<Vec<CandidateSpec>> {
    if config.algorithms.is_empty() {
        return Err(Error::Config("configuration lists no algorithms".into()));
    }
    let mut out = Vec::new();
    for (key, grid) in &config.algorithms {
        if key.is_empty() || key.contains(['/', '\\']) || key.starts_with('.') {
            return Err(Error::Config(format!("{key:?}: not usable as a candidate id prefix")));
        }
        let algorithm = resolve_algorithm(key, grid.algorithm_override(key)?)?;
        let lists = grid.sorted_lists(key)?;
        for (name, _) in &lists {
            if !allowed(algorithm).contains(&name.as_str()) {
                return Err(Error::Config(format!(
                    "{key}: parameter {name:?} does not apply to {algorithm} (allowed: {})",
                    allowed(algorithm).join(", ")
                )));
            }
        }

        let combos: Vec<Vec<&ParamValue>> = if lists.is_empty() {
            vec![Vec::new()]
        } else {
            lists.iter().map(|(_, vs)| vs.iter()).multi_cartesian_product().collect()
        };
        for (index, combo) in combos.into_iter().enumerate() {
            let mut params: BTreeMap<String, ParamValue> =
                lists.iter().map(|(n, _)| n.clone()).zip(combo.into_iter().cloned()).collect();
            for (name, value) in defaults(algorithm) {
                params.entry(name.to_string()).or_insert(value);
            }
            let candidate_id = format!("{key}_v{index}");
            let spec = CandidateSpec {
                seed: candidate_seed(config.seed, &candidate_id),
                candidate_id,
                config_key: key.clone(),
                algorithm,
                params,
            };
            spec.algorithm_params()?;
            out.push(spec);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn config(algorithms: &str) -> RunConfig {
        RunConfig::from_json(&format!(r#"{{"seed": 42, "dataset":{{"path":"x.csv"}},"algorithms":{algorithms}}}"#))
            .unwrap()
    }

    fn ids(specs: &[CandidateSpec]) -> Vec<&str> {
        specs.iter().map(|s| s.candidate_id.as_str()).collect()
    }

    #[test]
    fn kmeans_ids() {
        let specs = expand_grid(&config(r#"{"kmeans": {"k": [2, 3]}}"#)).unwrap();
        assert_eq!(ids(&specs), ["kmeans_v0", "kmeans_v1"]);
        assert_eq!(specs[1].params["k"], ParamValue::Int(3));
        assert_eq!(specs[0].params["n_init"], ParamValue::Int(10));
        assert_eq!(specs[0].algorithm_params().unwrap().clusters(), 2);
    }

    #[test]
    fn names_sorted_before_product() {
        let specs = expand_grid(&config(r#"{"ahc": {"linkage": ["ward", "single"], "k": [2]}}"#)).unwrap();
        assert_eq!(specs[0].params_label(), "k=2;linkage=ward");
        assert_eq!(specs[1].params_label(), "k=2;linkage=single");

        let specs = expand_grid(&config(r#"{"ahc": {"linkage": ["ward", "single"], "k": [2, 3]}}"#)).unwrap();
        let labels: Vec<String> = specs.iter().map(CandidateSpec::params_label).collect();
        assert_eq!(labels, ["k=2;linkage=ward", "k=2;linkage=single", "k=3;linkage=ward", "k=3;linkage=single"]);
    }

    #[test]
    fn twelve_candidate_grid() {
        let specs = expand_grid(&config(
            r#"{"kmeans":{"k":[2,3,4,5]}, "ahc":{"k":[2,3,4], "linkage":["ward","complete"]}, "nmf":{"rank":[2,3]}}"#,
        ))
        .unwrap();
        assert_eq!(specs.len(), 12);
        assert_eq!(specs[4].candidate_id, "ahc_v0");
        assert_eq!(specs[11].candidate_id, "nmf_v1");
    }

    #[test]
    fn keys_prefix_ids_and_select_algorithm() {
        let specs = expand_grid(&config(
            r#"{"kmeans_fine": {"k": [2]}, "coarse": {"algorithm": "kmeans", "k": [4]}}"#,
        ))
        .unwrap();
        assert_eq!(ids(&specs), ["kmeans_fine_v0", "coarse_v0"]);
        assert!(specs.iter().all(|s| s.algorithm == Algorithm::Kmeans));
    }

    #[test]
    fn configuration_errors_name_the_key() {
        for (grid, needle) in [
            (r#"{"dbscan": {"eps": [1]}}"#, "dbscan"),
            (r#"{"kmeans": {"k": []}}"#, "kmeans.k"),
            (r#"{"kmeans": {"k": [2], "linkage": ["ward"]}}"#, "kmeans"),
            (r#"{"ahc": {"k": [2]}}"#, "ahc_v0"),
            (r#"{"ahc": {"k": [2], "linkage": ["centroid"]}}"#, "ahc_v0"),
            (r#"{"nmf": {"rank": ["two"]}}"#, "nmf_v0"),
            (r#"{"kmeans": {"k": [-1]}}"#, "kmeans_v0"),
            (r#"{}"#, "no algorithms"),
        ] {
            match expand_grid(&config(grid)) {
                Err(Error::Config(msg)) => assert!(msg.contains(needle), "{grid}: {msg}"),
                other => panic!("{grid}: expected config error, got {other:?}"),
            }
        }
    }

    #[test]
    fn seeds_do_not_depend_on_other_keys() {
        let a = expand_grid(&config(r#"{"kmeans": {"k": [2, 3]}}"#)).unwrap();
        let b = expand_grid(&config(r#"{"ahc": {"k": [2], "linkage": ["ward"]}, "kmeans": {"k": [2, 3]}}"#)).unwrap();
        assert_eq!(a[0].seed, b[1].seed);
        assert_eq!(a[1].seed, b[2].seed);
        assert_ne!(a[0].seed, a[1].seed);
    }

    proptest! {
        #[test]
        fn count_is_sum_of_products(ks in prop::collection::vec(1usize..5, 1..4), linkages in 1usize..5, ranks in 1usize..4) {
            let k_list = |n: usize| (2..2 + n).map(|v| v.to_string()).join(",");
            let link_list = ["\"ward\"", "\"complete\"", "\"average\"", "\"single\""][..linkages].join(",");
            let mut parts = Vec::new();
            let mut expected = 0;
            for (i, &n) in ks.iter().enumerate() {
                parts.push(format!(r#""kmeans_{i}": {{"k": [{}], "n_init": [1, 2]}}"#, k_list(n)));
                expected += n * 2;
            }
            parts.push(format!(r#""ahc": {{"k": [2, 3], "linkage": [{link_list}]}}"#));
            expected += 2 * linkages;
            parts.push(format!(r#""nmf": {{"rank": [{}]}}"#, k_list(ranks)));
            expected += ranks;
            let specs = expand_grid(&config(&format!("{{{}}}", parts.join(",")))).unwrap();
            prop_assert_eq!(specs.len(), expected);
            let unique: std::collections::HashSet<_> = specs.iter().map(|s| &s.candidate_id).collect();
            prop_assert_eq!(unique.len(), specs.len());
        }
    }
}
