mod support;

use clustergrid_core::grid::{CandidateSpec, PreparedData};
use clustergrid_core::synthetic::{gaussian_blobs, BlobSpec};
use clustergrid_core::{
    agglomerative, kmeans, nmf, run_candidate, silhouette, Algorithm, Dataset, GateReason, GateStatus, KmeansParams,
    Linkage, Matrix, NmfParams, RunSettings,
};
use support::oracles::same_partition;

fn blobs() -> (Dataset, Vec<usize>) {
    let spec = BlobSpec::well_separated(300, 5, 3);
    assert!(spec.min_center_distance() >= 10.0 * spec.std);
    gaussian_blobs(&spec, 2024)
}

#[test]
fn every_algorithm_recovers_three_blobs() {
    let (data, truth) = blobs();
    let standardized = data.standardize();
    let minmax = data.minmax_scale();

    let mut fits = vec![("kmeans".to_string(), kmeans(standardized.values(), &KmeansParams::new(3), 1).unwrap())];
    for linkage in Linkage::ALL {
        fits.push((format!("ahc {linkage}"), agglomerative(standardized.values(), 3, linkage).unwrap()));
    }
    fits.push(("nmf".to_string(), nmf(minmax.values(), &NmfParams::new(3), 1).unwrap()));

    for (name, fit) in fits {
        assert!(same_partition(&fit.labels, &truth), "{name} did not recover the blobs");
        let s = silhouette(standardized.values(), &fit.labels).unwrap();
        assert!(s > 0.8, "{name}: silhouette {s}");
    }
}

fn spec(algorithm: Algorithm, params: &[(&str, &str)]) -> CandidateSpec {
    CandidateSpec {
        candidate_id: format!("{algorithm}_test"),
        config_key: algorithm.to_string(),
        algorithm,
        params: params
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::from_str(v).unwrap()))
            .collect(),
        seed: 5,
    }
}

fn candidates() -> Vec<CandidateSpec> {
    vec![
        spec(Algorithm::Kmeans, &[("k", "3"), ("n_init", "10"), ("max_iter", "300"), ("tol", "0.0001")]),
        spec(Algorithm::Ahc, &[("k", "3"), ("linkage", "\"ward\"")]),
        spec(Algorithm::Ahc, &[("k", "3"), ("linkage", "\"single\"")]),
        spec(Algorithm::Nmf, &[("rank", "3"), ("max_iter", "500"), ("tol", "0.00001")]),
    ]
}

#[test]
fn correct_k_passes_the_gate() {
    let (data, _) = blobs();
    let prepared = PreparedData::new(data);
    for s in candidates() {
        let report = run_candidate(&prepared, &s, &RunSettings::default());
        let r = report.results().unwrap_or_else(|| panic!("{}: {:?}", s.candidate_id, report.error()));
        assert_eq!(r.gate.status, GateStatus::Pass, "{}: {:?}", s.candidate_id, r.gate);
    }
}

#[test]
fn constant_features_rule_out_every_candidate() {
    let values = Matrix::from_vec(30, 5, vec![4.0; 150]);
    let columns = (1..=5).map(|i| format!("c{i}")).collect();
    let prepared = PreparedData::new(Dataset::new(columns, values).unwrap());
    for s in candidates() {
        let report = run_candidate(&prepared, &s, &RunSettings::default());
        let r = report.results().unwrap_or_else(|| panic!("{}: {:?}", s.candidate_id, report.error()));
        assert_eq!(r.gate.status, GateStatus::RuledOut);
        assert!(r.gate.reasons.contains(&GateReason::NoSignificantFeatures), "{:?}", r.gate.reasons);
    }
}
