use chiodo_bench::{small_grid, CORRELATORS, ELSV, HURWITZ};
use chiodo_core::cohft::chiodo_elsv_integral;
use chiodo_core::harness::cross_check;
use chiodo_core::hurwitz::{enumerate_oracle, orbifold_hurwitz, HurwitzQuery};
use chiodo_core::recursion::{SpectralCurveConfig, SpectralRecursion};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn recursion(c: &mut Criterion) {
    let mut group = c.benchmark_group("recursion");
    group.sample_size(10);
    for &(r, s, g, n) in CORRELATORS {
        group.bench_with_input(BenchmarkId::from_parameter(format!("r{r}s{s}g{g}n{n}")), &(r, s, g, n), |b, &(r, s, g, n)| {
            b.iter(|| {
                // fresh memo each time: the cost of the whole tower below (g, n)
                let rec = SpectralRecursion::new(SpectralCurveConfig::new(r, s).unwrap());
                black_box(rec.correlator(g, n).unwrap());
            })
        });
    }
    group.finish();
}

fn graph_sum(c: &mut Criterion) {
    let mut group = c.benchmark_group("chiodo_elsv");
    group.sample_size(10);
    for &(r, s, g, mu) in ELSV {
        group.bench_with_input(BenchmarkId::from_parameter(format!("r{r}s{s}g{g}{mu:?}")), &mu, |b, mu| {
            b.iter(|| black_box(chiodo_elsv_integral(r, s, g, mu).unwrap()))
        });
    }
    group.finish();
}

fn hurwitz(c: &mut Criterion) {
    let mut group = c.benchmark_group("hurwitz");
    for &(g, r, mu) in HURWITZ {
        let q = HurwitzQuery::new(g, r, mu.to_vec()).unwrap();
        group.bench_with_input(BenchmarkId::new("characters", format!("{q:?}")), &q, |b, q| {
            b.iter(|| black_box(orbifold_hurwitz(q).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("enumeration", format!("{q:?}")), &q, |b, q| {
            b.iter(|| black_box(enumerate_oracle(q).unwrap()))
        });
    }
    group.finish();
}

fn grid(c: &mut Criterion) {
    let mut group = c.benchmark_group("cross_check");
    group.sample_size(10);
    group.bench_function("hurwitz r≤2 g≤1 n≤2 Σμ≤4", |b| b.iter(|| black_box(cross_check(&small_grid()))));
    group.finish();
}

criterion_group!(benches, recursion, graph_sum, hurwitz, grid);
criterion_main!(benches);
