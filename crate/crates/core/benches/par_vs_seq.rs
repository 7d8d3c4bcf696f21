//! Parallel vs sequential throughput on the two data-parallel hot paths:
//! the integer convolution ladder behind the tau expansion, and the scan
//! over shifts. The rayon path runs in the default pool; the baseline is a
//! single-thread pool (tau) or the explicit sequential fallback (scan).

use criterion::{criterion_group, criterion_main, Criterion};
use cuspshift::forms::delta_form;
use cuspshift::shifted::{scan_stats, scan_stats_seq};

fn bench_tau(c: &mut Criterion) {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("pool");
    let mut group = c.benchmark_group("tau_expansion_4000");
    group.sample_size(10);
    group.bench_function("seq_one_thread", |b| {
        b.iter(|| single.install(|| delta_form(4_000).unwrap()))
    });
    group.bench_function("par_default_pool", |b| {
        b.iter(|| delta_form(4_000).unwrap())
    });
    group.finish();
}

fn bench_scan(c: &mut Criterion) {
    let delta = delta_form(2_010).unwrap();
    let mut group = c.benchmark_group("scan_r1_to_8_m2000");
    group.sample_size(20);
    group.bench_function("seq_fallback", |b| {
        b.iter(|| scan_stats_seq(&delta, 1, 8, 2_000).unwrap())
    });
    group.bench_function("par_rayon", |b| {
        b.iter(|| scan_stats(&delta, 1, 8, 2_000).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_tau, bench_scan);
criterion_main!(benches);
