//! End-to-end embed and extract timings.

use audiomark::{embed_multilevel, extract, DetectorMode};
use audiomark_bench::{bench_host, BENCH_WM_DCT, BENCH_WM_DWT};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn pipeline_benches(c: &mut Criterion) {
    let host = bench_host();
    let (marked, key) = embed_multilevel(&host, BENCH_WM_DWT, BENCH_WM_DCT, 0.05).unwrap();

    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);

    group.bench_function("embed_multilevel_33s", |b| {
        b.iter(|| embed_multilevel(black_box(&host), BENCH_WM_DWT, BENCH_WM_DCT, 0.05).unwrap())
    });

    group.bench_function("extract_static_33s", |b| {
        b.iter(|| extract(black_box(&marked), &key, DetectorMode::Static).unwrap())
    });

    group.bench_function("extract_adaptive_33s", |b| {
        b.iter(|| extract(black_box(&marked), &key, DetectorMode::Adaptive).unwrap())
    });

    group.finish();
}

criterion_group!(benches, pipeline_benches);
criterion_main!(benches);
