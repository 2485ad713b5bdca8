use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use clearnet_bench::{en_band, en_ring};
use clearnet_core::lattice::MetricSpec;
use clearnet_core::{
    banach_solve, kleene_greatest, kleene_least, phi, InstitutionState, SolveOptions,
};

fn bench_phi(c: &mut Criterion) {
    let mut group = c.benchmark_group("phi");
    for n in [10usize, 50, 200] {
        let net = en_band(n);
        let x = InstitutionState::bottom(&net).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| phi(&net, &x))
        });
    }
    group.finish();
}

fn bench_kleene(c: &mut Criterion) {
    let mut group = c.benchmark_group("kleene-least");
    let opts = SolveOptions::default();
    for n in [10usize, 50, 200] {
        let net = en_ring(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| kleene_least(&net, &opts).unwrap())
        });
    }
    group.finish();

    let mut group = c.benchmark_group("kleene-greatest");
    for n in [10usize, 50] {
        let net = en_band(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| kleene_greatest(&net, &opts).unwrap())
        });
    }
    group.finish();
}

fn bench_banach(c: &mut Criterion) {
    let mut group = c.benchmark_group("banach");
    let opts = SolveOptions::default();
    for n in [10usize, 50] {
        let net = en_band(n);
        let seed = InstitutionState::bottom(&net).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| banach_solve(&net, MetricSpec::L1Abs, &opts, &seed).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_phi, bench_kleene, bench_banach);
criterion_main!(benches);
