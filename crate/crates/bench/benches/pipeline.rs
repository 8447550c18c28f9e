use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use formstab_core::{
    cartan_three_form, centralizer_of_ad, invariant_forms, stabilizer_algebra, verify_stabilizers,
    LieAlgebra, Series, DEFAULT_SEED,
};

fn algebras() -> Vec<LieAlgebra> {
    [(Series::A, 2), (Series::B, 2), (Series::G, 2)]
        .into_iter()
        .map(|(s, r)| LieAlgebra::build(s, r).unwrap())
        .collect()
}

fn bench_invariants(c: &mut Criterion) {
    let mut group = c.benchmark_group("invariant_forms");
    for g in algebras() {
        group.bench_with_input(BenchmarkId::new("degree3", g.name()), &g, |b, g| {
            b.iter(|| invariant_forms(black_box(g), 3).unwrap())
        });
    }
    group.finish();
}

fn bench_stabilizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("stabilizer");
    for g in algebras() {
        let w = cartan_three_form(&g);
        group.bench_with_input(BenchmarkId::new("cartan3", g.name()), &(g, w), |b, (g, w)| {
            b.iter(|| stabilizer_algebra(black_box(g), black_box(w)).unwrap())
        });
    }
    group.finish();
}

fn bench_centralizer(c: &mut Criterion) {
    let mut group = c.benchmark_group("centralizer_of_ad");
    group.sample_size(10);
    for (s, r) in [(Series::A, 3), (Series::D, 4)] {
        let g = LieAlgebra::build(s, r).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(g.name()), &g, |b, g| {
            b.iter(|| centralizer_of_ad(black_box(g)))
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    let g = LieAlgebra::build(Series::G, 2).unwrap();
    group.bench_function("G2_degree3", |b| {
        b.iter(|| verify_stabilizers(black_box(&g), 3, DEFAULT_SEED).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_invariants, bench_stabilizer, bench_centralizer, bench_verify);
criterion_main!(benches);
