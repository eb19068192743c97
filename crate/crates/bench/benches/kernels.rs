use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use sel_bench::{petersen_copies, split};
use sel_core::{
    canonical_form, enumerate_feasible, max_cycle_packing, spectral_radius, EnumerationOptions, Graph,
};

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral_radius");
    for n in [100, 1000] {
        let g = split(n, 2);
        group.bench_with_input(BenchmarkId::new("split_k2", n), &g, |b, g| {
            b.iter(|| spectral_radius(black_box(g), 1e-12))
        });
    }
    group.finish();
}

fn packing(c: &mut Criterion) {
    let mut group = c.benchmark_group("max_cycle_packing");
    for copies in [1, 3] {
        let g = petersen_copies(copies);
        group.bench_with_input(BenchmarkId::new("petersen_copies", copies), &g, |b, g| {
            b.iter(|| max_cycle_packing(black_box(g)).unwrap())
        });
    }
    group.finish();
}

fn canonical(c: &mut Criterion) {
    let graphs = [
        ("petersen", Graph::petersen()),
        ("split_10_3", split(10, 2)),
        ("cycle_10", Graph::cycle(10).unwrap()),
    ];
    let mut group = c.benchmark_group("canonical_form");
    for (name, g) in &graphs {
        group.bench_function(*name, |b| b.iter(|| canonical_form(black_box(g)).unwrap()));
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_feasible");
    group.sample_size(10);
    for n in [6, 7] {
        group.bench_with_input(BenchmarkId::new("k2", n), &n, |b, &n| {
            b.iter(|| enumerate_feasible(n, 2, &EnumerationOptions::default(), |_| {}).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, spectral, packing, canonical, enumeration);
criterion_main!(benches);
