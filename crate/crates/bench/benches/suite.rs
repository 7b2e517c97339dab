use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use leaky_gap_bench::{segment, unit_circle};
use leaky_gap_core::bs;
use leaky_gap_core::numerics::{deflated_lanczos_topk, symmetric_eigen};
use leaky_gap_core::specfun::{k0, k1};

fn bench_bessel(c: &mut Criterion) {
    c.bench_function("bessel_k0_small", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 1..1000 {
                acc += k0(black_box(i as f64 * 0.002));
            }
            acc
        })
    });
    c.bench_function("bessel_k1_mixed", |b| {
        b.iter(|| {
            let mut acc = 0.0;
            for i in 1..1000 {
                acc += k1(black_box(0.05 + i as f64 * 0.03));
            }
            acc
        })
    });
}

fn bench_assembly(c: &mut Criterion) {
    let circle = unit_circle(256);
    let arc = segment(256);
    c.bench_function("assemble_circle_n256", |b| {
        b.iter(|| bs::assemble(black_box(&circle), 5.0, 256).unwrap())
    });
    c.bench_function("assemble_segment_n256", |b| {
        b.iter(|| bs::assemble(black_box(&arc), 5.0, 256).unwrap())
    });
}

fn bench_eigensolvers(c: &mut Criterion) {
    let circle = unit_circle(128);
    let disc = bs::assemble(&circle, 1.0, 128).unwrap();
    c.bench_function("jacobi_full_n128", |b| {
        b.iter(|| symmetric_eigen(black_box(&disc.matrix)).unwrap())
    });
    c.bench_function("lanczos_top3_n128", |b| {
        b.iter(|| {
            deflated_lanczos_topk(128, 3, |x, y| disc.matrix.mul_vec(x, y), 1e-12, 200).unwrap()
        })
    });
}

fn bench_solve(c: &mut Criterion) {
    let circle = unit_circle(128);
    let mut group = c.benchmark_group("bound_state");
    group.sample_size(10);
    group.bench_function("circle_alpha5_n64", |b| {
        b.iter(|| bs::solve_bound_state(black_box(&circle), 5.0, 0, 64, 1e-9).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_bessel, bench_assembly, bench_eigensolvers, bench_solve);
criterion_main!(benches);
