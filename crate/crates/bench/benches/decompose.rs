use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use arbor_bench::{forest_union, sparse_simple, SIZES};
use arbor_core::basic::{greedy_lfd, peeling_bound};
use arbor_core::forest::combine_fd;
use arbor_core::graph::pseudo_arboricity;
use arbor_core::orientation::low_outdegree_orientation;
use arbor_core::star::{star_forest_decomposition, StarMode, Thresholds};
use arbor_core::{Epsilon, PaletteSet, RandomStream, RoundLedger};

fn eps(x: f64) -> Epsilon {
    Epsilon::new(x).expect("valid epsilon")
}

fn orientation(c: &mut Criterion) {
    let mut group = c.benchmark_group("orientation");
    group.sample_size(10);
    for n in SIZES {
        let g = forest_union(n, 6);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| low_outdegree_orientation(g, eps(0.5), None, &RandomStream::new(1), &mut RoundLedger::new()).unwrap())
        });
    }
    group.finish();
}

fn forest(c: &mut Criterion) {
    let mut group = c.benchmark_group("combine_fd");
    group.sample_size(10);
    for n in SIZES {
        let g = forest_union(n, 8);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| combine_fd(g, eps(0.5), &RandomStream::new(1), &mut RoundLedger::new()).unwrap())
        });
    }
    group.finish();
}

fn greedy(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_lfd");
    for n in SIZES {
        let g = forest_union(n, 8);
        let a_star = pseudo_arboricity(&g).0.value;
        let palettes = PaletteSet::uniform(g.edge_count(), peeling_bound(eps(0.5), a_star));
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| greedy_lfd(g, eps(0.5), Some(a_star), &palettes, &mut RoundLedger::new()).unwrap())
        });
    }
    group.finish();
}

fn stars(c: &mut Criterion) {
    let mut group = c.benchmark_group("star_forest");
    group.sample_size(10);
    for n in SIZES {
        let g = sparse_simple(n, 8.0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &g, |b, g| {
            b.iter(|| {
                star_forest_decomposition(g, eps(0.5), StarMode::Sfd, None, Thresholds::Relaxed, &RandomStream::new(1), &mut RoundLedger::new())
                    .unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, orientation, forest, greedy, stars);
criterion_main!(benches);
