use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use pvaudit_bench::replicated_table;
use pvaudit_core::{
    audit, classify_shape, dersimonian_laird_pool, min_p_selection, reference, two_sided_p,
    SelectionSimConfig,
};

fn tail_p(c: &mut Criterion) {
    c.bench_function("two_sided_p/grid", |b| {
        b.iter(|| {
            (0..400)
                .map(|i| two_sided_p(black_box(i as f64 * 0.1)))
                .sum::<f64>()
        })
    });
}

fn audit_and_shape(c: &mut Criterion) {
    let mut group = c.benchmark_group("audit+classify");
    for copies in [1usize, 10, 100] {
        let d = replicated_table(copies);
        group.bench_with_input(BenchmarkId::from_parameter(d.len()), &d, |b, d| {
            b.iter(|| classify_shape(&audit(d, 0.05).unwrap()).unwrap())
        });
    }
    group.finish();
}

fn pooling(c: &mut Criterion) {
    let d = reference::pm25_allcause();
    c.bench_function("dersimonian_laird/29", |b| {
        b.iter(|| dersimonian_laird_pool(black_box(&d)).unwrap())
    });
}

fn selection(c: &mut Criterion) {
    let cfg = SelectionSimConfig {
        q_questions: 100,
        reps: 1_000,
        seed: 1,
        ..SelectionSimConfig::default()
    };
    c.bench_function("min_p_selection/q100x1000", |b| {
        b.iter(|| min_p_selection(&cfg).unwrap())
    });
}

criterion_group!(benches, tail_p, audit_and_shape, pooling, selection);
criterion_main!(benches);
