use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use entroplex::bounds::{logbound_polymatroid_dual, logbound_simple_entropic, logbound_step};
use entroplex::validity::{
    check_monotone_fixpoint, check_monotone_lp, check_polymatroid, check_step,
};
use entroplex_bench::{cycle_query, han, k4_coloring, scaled_cycle, worked_example};

fn monotone(c: &mut Criterion) {
    let mut g = c.benchmark_group("monotone");
    let ex = worked_example();
    g.bench_function("fixpoint/worked", |b| {
        b.iter(|| check_monotone_fixpoint(black_box(&ex)))
    });
    g.bench_function("lp/worked", |b| {
        b.iter(|| check_monotone_lp(black_box(&ex)))
    });
    for k in [1, 10, 100] {
        let e = scaled_cycle(6, k);
        g.bench_with_input(BenchmarkId::new("fixpoint/cycle6", k), &e, |b, e| {
            b.iter(|| check_monotone_fixpoint(e))
        });
        g.bench_with_input(BenchmarkId::new("lp/cycle6", k), &e, |b, e| {
            b.iter(|| check_monotone_lp(e))
        });
    }
    g.finish();
}

fn lp(c: &mut Criterion) {
    let mut g = c.benchmark_group("polymatroid");
    g.sample_size(10);
    for n in [3, 4, 5] {
        let e = han(n);
        g.bench_with_input(BenchmarkId::new("han", n), &e, |b, e| {
            b.iter(|| check_polymatroid(e))
        });
    }
    g.finish();
}

fn step(c: &mut Criterion) {
    let e = k4_coloring();
    c.bench_function("step/k4-coloring", |b| b.iter(|| check_step(black_box(&e))));
}

fn bounds(c: &mut Criterion) {
    let mut g = c.benchmark_group("bounds");
    g.sample_size(10);
    for n in [3, 4, 5] {
        let (q, s) = cycle_query(n);
        g.bench_with_input(BenchmarkId::new("simple", n), &(&q, &s), |b, (q, s)| {
            b.iter(|| logbound_simple_entropic(q, s))
        });
        g.bench_with_input(BenchmarkId::new("step", n), &(&q, &s), |b, (q, s)| {
            b.iter(|| logbound_step(q, s))
        });
        g.bench_with_input(
            BenchmarkId::new("polymatroid", n),
            &(&q, &s),
            |b, (q, s)| b.iter(|| logbound_polymatroid_dual(q, s)),
        );
    }
    g.finish();
}

criterion_group!(benches, monotone, lp, step, bounds);
criterion_main!(benches);
