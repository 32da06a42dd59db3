use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use osn_bench::{dataset, profiles, scaled_config};
use osn_core::enrich::enrich;
use osn_core::graphstats::graph_report;
use osn_core::similarity::{optimal_blogrolls, similarity_matrix_with_workers};

fn bench_enrich(c: &mut Criterion) {
    let mut group = c.benchmark_group("enrich");
    for communities in [4, 16] {
        let ds = dataset(&scaled_config(communities));
        group.bench_with_input(
            BenchmarkId::from_parameter(communities * 50),
            &ds,
            |b, ds| b.iter(|| enrich(&ds.posts, &ds.assignments)),
        );
    }
    group.finish();
}

fn bench_similarity(c: &mut Criterion) {
    let mut group = c.benchmark_group("similarity_matrix");
    group.sample_size(20);
    for communities in [4, 16] {
        let p = profiles(&dataset(&scaled_config(communities)));
        for workers in [1, 4] {
            let id = BenchmarkId::new(format!("tag/{workers}w"), communities * 50);
            group.bench_with_input(id, &p.tag, |b, m| {
                b.iter(|| similarity_matrix_with_workers(m, workers).unwrap())
            });
        }
        let s = similarity_matrix_with_workers(&p.tag, 4).unwrap();
        group.bench_with_input(BenchmarkId::new("top_k", communities * 50), &s, |b, s| {
            b.iter(|| optimal_blogrolls(s, osn_core::DEFAULT_K).unwrap())
        });
    }
    group.finish();
}

fn bench_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("graph_report");
    group.sample_size(20);
    for communities in [4, 16] {
        let ds = dataset(&scaled_config(communities));
        group.bench_with_input(
            BenchmarkId::from_parameter(communities * 50),
            &ds.blogroll,
            |b, g| b.iter(|| graph_report(g, 5)),
        );
    }
    group.finish();
}

criterion_group!(benches, bench_enrich, bench_similarity, bench_graph);
criterion_main!(benches);
