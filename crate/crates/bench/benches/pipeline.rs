use std::hint::black_box;

use clustergrid_bench::{blobs, survey};
use clustergrid_core::{
    agglomerative, expand_grid, kmeans, nmf, profile_clusters, run_all, silhouette, KmeansParams, Linkage, NmfParams,
    RunConfig,
};
use clustergrid_core::profiling::ProfileSettings;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn algorithms(c: &mut Criterion) {
    let mut group = c.benchmark_group("fit");
    for rows in [150, 600] {
        let data = blobs(rows, 5, 3).standardize();
        let minmax = blobs(rows, 5, 3).minmax_scale();
        group.bench_with_input(BenchmarkId::new("kmeans_k3", rows), &data, |b, d| {
            b.iter(|| kmeans(black_box(d.values()), &KmeansParams::new(3), 1).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("ahc_ward_k3", rows), &data, |b, d| {
            b.iter(|| agglomerative(black_box(d.values()), 3, Linkage::Ward).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("nmf_rank3", rows), &minmax, |b, d| {
            b.iter(|| nmf(black_box(d.values()), &NmfParams::new(3), 1).unwrap())
        });
    }
    group.finish();
}

fn scoring(c: &mut Criterion) {
    let data = survey(519);
    let scaled = data.standardize();
    let labels = kmeans(scaled.values(), &KmeansParams::new(3), 1).unwrap().labels;
    c.bench_function("silhouette_519x20", |b| b.iter(|| silhouette(black_box(scaled.values()), &labels).unwrap()));
    c.bench_function("profile_519x20_k3", |b| {
        b.iter(|| profile_clusters(black_box(&data), &labels, 3, &ProfileSettings::default()).unwrap())
    });
}

fn grid(c: &mut Criterion) {
    let data = survey(519);
    let config = RunConfig::from_json(
        r#"{"seed": 42, "dataset": {"path": "bench"}, "algorithms": {
            "kmeans": {"k": [2, 3, 4, 5]},
            "ahc": {"k": [2, 3, 4], "linkage": ["ward", "complete", "average"]},
            "nmf": {"rank": [2, 3, 4]}}}"#,
    )
    .unwrap();
    assert_eq!(expand_grid(&config).unwrap().len(), 16);
    let mut group = c.benchmark_group("grid_16_candidates");
    group.sample_size(10);
    group.bench_function("serial", |b| b.iter(|| run_all(&data, &config, Some(1)).unwrap()));
    group.bench_function("parallel", |b| b.iter(|| run_all(&data, &config, None).unwrap()));
    group.finish();
}

criterion_group!(benches, algorithms, scoring, grid);
criterion_main!(benches);
