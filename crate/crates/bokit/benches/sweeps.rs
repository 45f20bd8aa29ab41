//! Section sweeps and fuzz batches, sequential vs rayon.
//!
//! The library's own sweep entry points honor the `parallel` feature;
//! here both strategies are driven explicitly over the public check
//! functions so one build can measure the speedup side by side.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use bokit::identities::{bo_check, CheckParams, ScalarPipeline};
use bokit::symbol::LaurentSeries;

fn smooth_pipeline() -> ScalarPipeline {
    let log = LaurentSeries::from_scalar_coeffs(
        1,
        &[(1, Complex64::new(0.3, 0.0)), (-1, Complex64::new(0.3, 0.0))],
    )
    .unwrap();
    ScalarPipeline::from_log_coeffs(&log, &CheckParams::default()).unwrap()
}

fn random_log(seed: u64) -> LaurentSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut log = LaurentSeries::zeros(1, 16);
    for k in 1..=16i64 {
        let bound = 0.3 * 0.5f64.powi(k as i32);
        for sign in [1i64, -1] {
            let radius = bound * rng.random::<f64>().sqrt();
            let angle = rng.random::<f64>() * std::f64::consts::TAU;
            log.set_scalar(k * sign, Complex64::from_polar(radius, angle));
        }
    }
    log
}

fn bench_section_sweep(c: &mut Criterion) {
    let pipeline = smooth_pipeline();
    let ns: Vec<usize> = (1..=24).collect();
    let mut group = c.benchmark_group("bo_section_sweep");
    group.bench_function("sequential", |b| {
        b.iter(|| {
            let total: f64 = ns
                .iter()
                .map(|&n| bo_check(&pipeline, n).unwrap().rel_residual)
                .sum();
            black_box(total)
        })
    });
    group.bench_function("rayon", |b| {
        b.iter(|| {
            let total: f64 = ns
                .par_iter()
                .map(|&n| bo_check(&pipeline, n).unwrap().rel_residual)
                .sum();
            black_box(total)
        })
    });
    group.finish();
}

fn bench_fuzz_batch(c: &mut Criterion) {
    let params = CheckParams::default();
    let seeds: Vec<u64> = (0..16).collect();
    let run_one = |seed: &u64| -> f64 {
        let pipeline = ScalarPipeline::from_log_coeffs(&random_log(*seed), &params).unwrap();
        (1..=8)
            .map(|n| bo_check(&pipeline, n).unwrap().rel_residual)
            .sum()
    };
    let mut group = c.benchmark_group("fuzz_batch");
    group.sample_size(20);
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(seeds.iter().map(run_one).sum::<f64>()))
    });
    group.bench_function("rayon", |b| {
        b.iter(|| black_box(seeds.par_iter().map(run_one).sum::<f64>()))
    });
    group.finish();
}

criterion_group!(benches, bench_section_sweep, bench_fuzz_batch);
criterion_main!(benches);
