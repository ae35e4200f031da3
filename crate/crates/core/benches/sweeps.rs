//! Sequential vs. parallel sweeps. Without the `parallel` feature only the
//! sequential variants are measured.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use stratum_spin::arf::count_arf;
use stratum_spin::enumerate::{enumerate_rows, EnumerationBounds};
use stratum_spin::selftest::{billiard_corpus, routes_agree, triple_route_corpus};
use stratum_spin::{billiard, Execution, Flavor};

fn strategies() -> Vec<(&'static str, Execution)> {
    vec![
        ("sequential", Execution::Sequential),
        #[cfg(feature = "parallel")]
        ("parallel", Execution::Parallel),
    ]
}

fn arf_counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("count_arf");
    for genus in [4u32, 6] {
        for (name, exec) in strategies() {
            group.bench_with_input(BenchmarkId::new(name, genus), &genus, |b, &g| {
                b.iter(|| count_arf(black_box(g), 12, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn triple_route(c: &mut Criterion) {
    let corpus = triple_route_corpus();
    let mut group = c.benchmark_group("triple_route");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_function(name, |b| {
            b.iter(|| exec.find_map_first(&corpus, |p| routes_agree(p).err()))
        });
    }
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let bounds = EnumerationBounds::new(Flavor::Quadratic, 24, 8);
    let mut group = c.benchmark_group("enumerate_rows");
    group.sample_size(10);
    for (name, exec) in strategies() {
        group.bench_function(name, |b| b.iter(|| enumerate_rows(black_box(&bounds), exec)));
    }
    group.finish();
}

fn billiards(c: &mut Criterion) {
    let corpus = billiard_corpus();
    let mut group = c.benchmark_group("billiard_classify");
    for (name, exec) in strategies() {
        group.bench_function(name, |b| {
            b.iter(|| exec.map(&corpus, |t| billiard::classify(t).is_ok()))
        });
    }
    group.finish();
}

criterion_group!(benches, arf_counting, triple_route, enumeration, billiards);
criterion_main!(benches);
