use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dicke_bench::running_example;
use dicke_core::{fluctuations, meanfield, sweep};

fn bench_minimize(c: &mut Criterion) {
    let p = running_example(0.45);
    c.bench_function("meanfield_minimize", |b| {
        b.iter(|| meanfield::minimize(black_box(&p)).unwrap())
    });
    c.bench_function("brute_force_beta", |b| {
        b.iter(|| meanfield::brute_force_beta(black_box(&p)))
    });
}

fn bench_fluctuations(c: &mut Criterion) {
    let p = running_example(0.45);
    c.bench_function("solve_fluctuations_phase2", |b| {
        b.iter(|| fluctuations::solve_fluctuations(black_box(&p)).unwrap())
    });
}

fn bench_sweep(c: &mut Criterion) {
    let p = running_example(0.2);
    let grid = sweep::linspace(0.01, 0.49, 200);
    c.bench_function("sweep_200_points", |b| {
        b.iter(|| sweep::sweep_g(black_box(&p), &grid, &sweep::SweepConfig::default()))
    });
}

criterion_group!(benches, bench_minimize, bench_fluctuations, bench_sweep);
criterion_main!(benches);
