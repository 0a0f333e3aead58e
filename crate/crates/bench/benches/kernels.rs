//! Microbenchmarks for the transform and detection kernels.

use audiomark::dsp::dct::{dct_forward, dct_inverse};
use audiomark::dsp::dwt::dwt4_forward;
use audiomark::dsp::svd::{svd_small, SmallMatrix};
use audiomark::{midpoint_threshold, refined_threshold, KNOWN_CHAR_BITS};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn kernel_benches(c: &mut Criterion) {
    let frame: Vec<f64> = (0..4400)
        .map(|i| (0.011 * i as f64).sin() + 0.3 * (0.17 * i as f64).cos())
        .collect();

    c.bench_function("dct_forward_4400", |b| {
        b.iter(|| dct_forward(black_box(&frame)))
    });

    let coeffs = dct_forward(&frame);
    c.bench_function("dct_inverse_4400", |b| {
        b.iter(|| dct_inverse(black_box(&coeffs)))
    });

    c.bench_function("dwt4_forward_4400", |b| {
        b.iter(|| dwt4_forward(black_box(&frame)).unwrap())
    });

    let mut m = SmallMatrix::zero(4);
    for r in 0..4 {
        for col in 0..4 {
            m.data[r][col] = ((r * 7 + col * 3) as f64).sin() + 0.1;
        }
    }
    c.bench_function("svd_small_4x4", |b| {
        b.iter(|| svd_small(black_box(&m)).unwrap())
    });

    let clean = [1.05, 1.0, 1.05, 1.0, 1.05, 1.0, 1.05];
    let noisy = [1.02, 1.01, 1.06, 0.99, 1.03, 1.02, 1.04];
    c.bench_function("midpoint_threshold", |b| {
        b.iter(|| midpoint_threshold(black_box(&clean), &KNOWN_CHAR_BITS))
    });
    c.bench_function("refined_threshold_noisy", |b| {
        b.iter(|| refined_threshold(black_box(&noisy), &KNOWN_CHAR_BITS))
    });
}

criterion_group!(benches, kernel_benches);
criterion_main!(benches);
