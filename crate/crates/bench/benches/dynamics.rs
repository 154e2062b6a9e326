use std::f64::consts::PI;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use otto_core::otto::run_cycle;
use otto_core::qdyn::{propagate, propagate_fixed};
use otto_core::{HamiltonianSpec, RampProtocol};
use otto_bench::tilted_cycle;

fn propagators(c: &mut Criterion) {
    let spec = HamiltonianSpec::with_theta(PI / 5.0).unwrap();
    let mut group = c.benchmark_group("propagate_fixed");
    for steps in [256usize, 4096] {
        let ramp = RampProtocol::forward(1.0, 15.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(steps), &steps, |b, &n| {
            b.iter(|| propagate_fixed(black_box(&spec), black_box(&ramp), n))
        });
    }
    group.finish();

    let short = RampProtocol::forward(1.0, 0.5513).unwrap();
    c.bench_function("propagate_adaptive_short", |b| {
        b.iter(|| propagate(black_box(&spec), black_box(&short), 1e-10).unwrap())
    });
}

fn cycle(c: &mut Criterion) {
    let spec = tilted_cycle();
    c.bench_function("run_cycle", |b| b.iter(|| run_cycle(black_box(&spec), 1e-10).unwrap()));
}

criterion_group!(benches, propagators, cycle);
criterion_main!(benches);
