//! Single-threaded against the default rayon pool for the two hot loops:
//! bootstrap replications inside one test, and Monte Carlo replications.
//! Build with `--no-default-features` to time the sequential fallback, where
//! the pool size has no effect.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heterour_core::dgp::{simulate_series, DgpSpec, VolCase};
use heterour_core::{abb_test, mc_size_power, BlockChoice, StatChoice, TestConfig};

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let default_threads = rayon::current_num_threads();
    let mut out = vec![(
        "1-thread".to_string(),
        rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap(),
    )];
    // Always at least two workers so the parallel path is exercised even on
    // a single-core host.
    let n = default_threads.max(2);
    out.push((
        format!("{n}-threads"),
        rayon::ThreadPoolBuilder::new().num_threads(n).build().unwrap(),
    ));
    out
}

fn spec(t_len: usize) -> DgpSpec {
    DgpSpec { vol_case: VolCase::OneShift, sigma1: 5.0, t_len, ..Default::default() }
}

fn bench_abb(c: &mut Criterion) {
    let mut group = c.benchmark_group("abb_test");
    group.sample_size(10);
    for t_len in [100, 400] {
        let y = simulate_series(&spec(t_len), 1).unwrap();
        let cfg = TestConfig { stat: StatChoice::Lt, ..Default::default() };
        for (name, pool) in pools() {
            group.bench_with_input(BenchmarkId::new(name, t_len), &y, |b, y| {
                b.iter(|| pool.install(|| abb_test(y.values(), &cfg).unwrap()))
            });
        }
    }
    group.finish();
}

fn bench_mc(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_size_power");
    group.sample_size(10);
    let cfg = TestConfig {
        stat: StatChoice::Lt,
        replications: 99,
        block: BlockChoice::Fixed(1),
        ..Default::default()
    };
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::new(name, "T100x50"), |b| {
            b.iter(|| pool.install(|| mc_size_power(&spec(100), &cfg, 50, 0.05, 7).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_abb, bench_mc);
criterion_main!(benches);
