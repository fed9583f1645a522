use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use std::hint::black_box;
use tedk::align::greedy_bounded_align;
use tedk::engine::{self, EngineConfig};
use tedk::runs::compute_runs;
use tedk::ted_threshold;
use tedk_bench::{edited_pair, edited_strings, identical_pair, periodic_string};

fn engine_identical(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine_identical");
    group.sample_size(10);
    for n in [10_000, 40_000, 160_000] {
        let (f, g) = identical_pair(n, 1);
        let mut cfg = EngineConfig::new(2);
        cfg.shortcuts = false;
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| engine::run(black_box(&f), black_box(&g), &cfg).unwrap().value)
        });
    }
    group.finish();
}

fn engine_edited(c: &mut Criterion) {
    let mut group = c.benchmark_group("engine_edited");
    group.sample_size(10);
    for n in [10_000, 40_000] {
        let (f, g) = edited_pair(n, 2, 2);
        let cfg = EngineConfig::new(3);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| engine::run(black_box(&f), black_box(&g), &cfg).unwrap().value)
        });
    }
    group.finish();
}

fn oracle_small(c: &mut Criterion) {
    let mut group = c.benchmark_group("ted_threshold");
    for n in [100, 400] {
        let (f, g) = edited_pair(n, 2, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| ted_threshold(black_box(&f), black_box(&g), 3))
        });
    }
    group.finish();
}

fn greedy_align(c: &mut Criterion) {
    let mut group = c.benchmark_group("greedy_bounded_align");
    for n in [100_000, 200_000, 400_000] {
        let (x, y) = edited_strings(n, 3, 4);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| greedy_bounded_align(black_box(&x), black_box(&y), 6, 3).is_some())
        });
    }
    group.finish();
}

fn runs(c: &mut Criterion) {
    let mut group = c.benchmark_group("compute_runs");
    for n in [10_000, 100_000] {
        let s = periodic_string(n, 20, 5);
        group.throughput(Throughput::Elements(n as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| compute_runs(black_box(&s)).len())
        });
    }
    group.finish();
}

criterion_group!(benches, engine_identical, engine_edited, oracle_small, greedy_align, runs);
criterion_main!(benches);
