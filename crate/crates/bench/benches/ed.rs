use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use dicke_bench::{even_sector, running_example};
use dicke_core::ed::{build_hamiltonian, solve_lowest_with, SolveOptions, SolverChoice};

fn bench_assembly(c: &mut Criterion) {
    let p = running_example(0.45);
    let basis = even_sector(400);
    c.bench_function("build_hamiltonian_n100_c400", |b| {
        b.iter(|| build_hamiltonian(black_box(&p), &basis).unwrap())
    });
}

fn bench_solvers(c: &mut Criterion) {
    let mut group = c.benchmark_group("ground_state");
    group.sample_size(10);
    let p = running_example(0.45);
    let opts = SolveOptions::default().with_k(2);
    // plain Lanczos needs thousands of matvecs here; keep it to the small cutoff
    let basis = even_sector(100);
    group.bench_function("lanczos_c100", |b| {
        b.iter(|| solve_lowest_with(&p, &basis, &opts.with_solver(SolverChoice::Lanczos)).unwrap())
    });
    for cutoff in [100, 400] {
        let basis = even_sector(cutoff);
        group.bench_function(format!("shift_invert_c{cutoff}"), |b| {
            b.iter(|| solve_lowest_with(&p, &basis, &opts.with_solver(SolverChoice::ShiftInvert)).unwrap())
        });
    }
    let small = even_sector(14);
    group.bench_function("dense_c14", |b| {
        b.iter(|| solve_lowest_with(&p, &small, &opts.with_solver(SolverChoice::Dense)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_assembly, bench_solvers);
criterion_main!(benches);
