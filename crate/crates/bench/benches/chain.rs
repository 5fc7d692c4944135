use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sbchain::{matrix_power, period, sbp_chain, stationary_distribution};
use sbchain_bench::dense_chain;

fn bench_matrix_power(c: &mut Criterion) {
    let sbp = sbp_chain();
    let mut group = c.benchmark_group("matrix_power/sbp");
    for n in [8u32, 64, 512] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| matrix_power(black_box(sbp.matrix()), n))
        });
    }
    group.finish();
}

fn bench_stationary(c: &mut Criterion) {
    let mut group = c.benchmark_group("stationary_distribution/dense");
    for k in [3usize, 8, 16] {
        let p = dense_chain(k);
        group.bench_with_input(BenchmarkId::from_parameter(k), &p, |b, p| {
            b.iter(|| stationary_distribution(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn bench_period(c: &mut Criterion) {
    let p = dense_chain(32);
    c.bench_function("period/dense_32", |b| {
        b.iter(|| period(black_box(&p), 0).unwrap())
    });
}

criterion_group!(benches, bench_matrix_power, bench_stationary, bench_period);
criterion_main!(benches);
