use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fuzzsheaf::fuzzy::{colimit, limit};
use fuzzsheaf::sheaf::{level_cut, psi_of};
use fuzzsheaf::stalks::{stalkwise_check, StalkMode};
use fuzzsheaf::vr::{vr_build, VrOptions};
use fuzzsheaf_bench::{chain, cloud, fuzzy_set, inclusion};

fn vr(c: &mut Criterion) {
    let mut group = c.benchmark_group("vr_build");
    for n in [8, 16, 32] {
        let points = cloud(n, 7);
        group.bench_with_input(BenchmarkId::from_parameter(n), &points, |b, p| {
            b.iter(|| vr_build(p, &VrOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn diagrams(c: &mut Criterion) {
    let mut group = c.benchmark_group("diagram");
    for width in [4, 16, 64] {
        let d = chain(4, width, 11);
        group.bench_with_input(BenchmarkId::new("colimit", width), &d, |b, d| b.iter(|| colimit(d).unwrap()));
        group.bench_with_input(BenchmarkId::new("limit", width), &d, |b, d| b.iter(|| limit(d).unwrap()));
    }
    group.finish();
}

fn level_cuts(c: &mut Criterion) {
    let mut group = c.benchmark_group("level_cut_round_trip");
    for n in [100, 1000, 10000] {
        let set = fuzzy_set(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &set, |b, s| {
            b.iter(|| psi_of(&level_cut(s)).unwrap())
        });
    }
    group.finish();
}

fn stalkwise(c: &mut Criterion) {
    let mut group = c.benchmark_group("stalkwise_iso");
    for n in [100, 1000, 10000] {
        let (small, big, map) = inclusion(n, 5);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(small, big, map), |b, (s, t, m)| {
            b.iter(|| stalkwise_check(s, t, m, StalkMode::Iso).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, vr, diagrams, level_cuts, stalkwise);
criterion_main!(benches);
