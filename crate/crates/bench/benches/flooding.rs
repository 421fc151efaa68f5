use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flood_bench::{er_fixture, power_law_fixture};
use flood_core::analytics::digraph_analysis;
use flood_core::graph::{generate_configuration, generate_er};
use flood_core::sim::run_flood;
use flood_core::{DegreeModel, FloodRule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn rules() -> [FloodRule; 3] {
    [
        FloodRule::Uninformed,
        FloodRule::Probabilistic { p: 0.6 },
        FloodRule::Heuristic { alpha: 0.95 },
    ]
}

fn flood_runs(c: &mut Criterion) {
    let mut group = c.benchmark_group("flood");
    for (name, (graph, comp)) in [
        ("er_z6", er_fixture(10_000, 6.0, 1)),
        ("power_law_2.5", power_law_fixture(10_000, 2.5, 1)),
    ] {
        let origin = comp.largest_nodes()[0];
        for rule in rules() {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            group.bench_with_input(BenchmarkId::new(name, rule), &rule, |b, &rule| {
                b.iter(|| run_flood(&graph, &comp, origin, rule, &mut rng).unwrap())
            });
        }
    }
    group.finish();
}

fn analytics(c: &mut Criterion) {
    let mut group = c.benchmark_group("analytics");
    group.sample_size(20);
    for (name, model) in [
        ("poisson_z6", DegreeModel::poisson(6.0, 9999).unwrap()),
        ("power_law_2.5", DegreeModel::power_law(2.5, 9999).unwrap()),
    ] {
        for rule in rules() {
            group.bench_with_input(BenchmarkId::new(name, rule), &rule, |b, &rule| {
                b.iter(|| digraph_analysis(black_box(&model), rule, 10_000).unwrap())
            });
        }
    }
    group.finish();
}

fn generation(c: &mut Criterion) {
    let mut group = c.benchmark_group("generate");
    group.sample_size(20);
    let model = DegreeModel::power_law(2.5, 9999).unwrap();
    group.bench_function("er_n10000_z6", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        b.iter(|| generate_er(10_000, 6.0, &mut rng).unwrap())
    });
    group.bench_function("configuration_n10000_tau2.5", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        b.iter(|| generate_configuration(10_000, &model, &mut rng).unwrap())
    });
    group.finish();
}

criterion_group!(benches, flood_runs, analytics, generation);
criterion_main!(benches);
