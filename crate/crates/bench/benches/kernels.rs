use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qvdc_bench::{inverse_phase_spec, mixed_spec, sample_lambda};
use qvdc_core::complete::{sigma, sigma_direct, Method};
use qvdc_core::opt::{gamma_of_theta, optimize_word};
use qvdc_core::quadratic::{correspondence, roots_minus_one};
use qvdc_core::rational::ratio;
use qvdc_core::sieve::build_table;
use qvdc_core::trace::{incomplete_sum_threads, kloosterman_table};
use qvdc_core::Objective;

fn complete_sums(c: &mut Criterion) {
    let lam = sample_lambda();
    let mut g = c.benchmark_group("complete_sum");
    g.sample_size(10);
    g.bench_function("direct_1e6", |b| b.iter(|| sigma_direct(black_box(&lam), 1_000_000).unwrap()));
    g.bench_function("stationary_3^5*5^4*7^3", |b| {
        b.iter(|| sigma(black_box(&lam), 243 * 625 * 343, Method::Stationary).unwrap())
    });
    g.finish();
}

fn incomplete_sums(c: &mut Criterion) {
    let mut g = c.benchmark_group("incomplete_sum");
    g.sample_size(10);
    let spec = mixed_spec();
    for threads in [1usize, 4] {
        g.bench_with_input(BenchmarkId::new("mixed_1e6", threads), &threads, |b, &t| {
            b.iter(|| incomplete_sum_threads(&spec, 12_345, 1_000_000, Some(t)).unwrap())
        });
    }
    let inv = inverse_phase_spec();
    g.bench_function("inverse_phase_1e5", |b| b.iter(|| incomplete_sum_threads(&inv, 0, 100_000, Some(1)).unwrap()));
    g.finish();
}

fn trace_tables(c: &mut Criterion) {
    c.bench_function("kloosterman_k3_p211", |b| b.iter(|| kloosterman_table(3, black_box(211))));
}

fn exact_side(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    g.sample_size(10);
    g.bench_function("rankin_depth_30", |b| {
        b.iter(|| optimize_word(Objective::MinKappaPlusLambda, 30, Duration::from_secs(60)))
    });
    g.bench_function("gamma_64/97", |b| b.iter(|| gamma_of_theta(black_box(&ratio(64, 97))).unwrap()));
    g.finish();
}

fn quadratic_and_sieve(c: &mut Criterion) {
    c.bench_function("roots_minus_one_1e9+9", |b| b.iter(|| roots_minus_one(black_box(1_000_000_009))));
    c.bench_function("correspondence_5^4*13^2", |b| b.iter(|| correspondence(black_box(625 * 169)).unwrap()));
    let mut g = c.benchmark_group("sieve");
    g.sample_size(10);
    g.bench_function("table_h1/1024", |b| b.iter(|| build_table(20.0, 1.0 / 1024.0).unwrap()));
    g.finish();
}

criterion_group!(benches, complete_sums, incomplete_sums, trace_tables, exact_side, quadratic_and_sieve);
criterion_main!(benches);
