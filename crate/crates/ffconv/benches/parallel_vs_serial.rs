// Benchmarks for the trial-parallel entry points against their sequential
// baselines, plus the single-shot primitives underneath them.
//
//   cargo bench                       # rayon pool (default features)
//   cargo bench --no-default-features # sequential fallback only

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

#[cfg(feature = "parallel")]
use ffconv::conjecture::run_campaign;
use ffconv::conjecture::{run_campaign_sequential, FuzzConfig};
use ffconv::convolution::convolve;
use ffconv::flow::integrate_flow;
use ffconv::roots::find_real_roots;
use ffconv::RealRootedPoly;

fn equispaced(d: usize, spacing: f64) -> RealRootedPoly {
    let roots: Vec<f64> = (0..d)
        .map(|i| spacing * (i as f64 - (d as f64 - 1.0) / 2.0))
        .collect();
    RealRootedPoly::from_roots(&roots).unwrap()
}

fn bench_campaign(c: &mut Criterion) {
    let mut group = c.benchmark_group("campaign");
    group.sample_size(20);
    for trials in [1_000u64, 5_000] {
        let mut config = FuzzConfig::with_seed(42);
        config.trials = trials;
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", trials), &config, |b, cfg| {
            b.iter(|| run_campaign(black_box(cfg)).unwrap())
        });
        group.bench_with_input(
            BenchmarkId::new("sequential", trials),
            &config,
            |b, cfg| b.iter(|| run_campaign_sequential(black_box(cfg)).unwrap()),
        );
    }
    group.finish();
}

fn bench_convolve(c: &mut Criterion) {
    let mut group = c.benchmark_group("convolve");
    for d in [4usize, 8, 16] {
        let p = equispaced(d, 1.0);
        let q = equispaced(d, 0.7);
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            b.iter(|| convolve(black_box(&p), black_box(&q)).unwrap())
        });
    }
    group.finish();
}

fn bench_root_finding(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_real_roots");
    for d in [4usize, 8, 16] {
        let coeffs = equispaced(d, 1.0).coeffs().to_vec();
        group.bench_with_input(BenchmarkId::from_parameter(d), &coeffs, |b, coeffs| {
            b.iter(|| find_real_roots(black_box(coeffs)).unwrap())
        });
    }
    group.finish();
}

fn bench_flow_trace(c: &mut Criterion) {
    let mut group = c.benchmark_group("flow_trace");
    group.sample_size(20);
    let p = equispaced(6, 0.9);
    let q = equispaced(6, 0.6);
    for steps in [200usize, 1000] {
        group.bench_with_input(BenchmarkId::from_parameter(steps), &steps, |b, &steps| {
            b.iter(|| integrate_flow(black_box(&p), black_box(&q), 1e-4, steps).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_campaign,
    bench_convolve,
    bench_root_finding,
    bench_flow_trace
);
criterion_main!(benches);
