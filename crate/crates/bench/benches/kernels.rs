//! Benchmarks for the hot path: the smoothing inverse, one tendency
//! evaluation, one time step, and a short end-to-end run.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use twonov_core::exact::mollified_peakon;
use twonov_core::helmholtz::helm_inv;
use twonov_core::{integrate, rhs_uv, step_rk4, Grid, SolverConfig, TimeStep};

fn production_state(points: usize, width: u32) -> twonov_core::State {
    let grid = Grid::new(40.0, points).unwrap();
    mollified_peakon(1.0, width, grid).unwrap()
}

fn smoothing_inverse(c: &mut Criterion) {
    let s = production_state(2048, 16);
    c.bench_function("helm_inv n=2048", |b| b.iter(|| helm_inv(black_box(&s.u))));
}

fn tendency(c: &mut Criterion) {
    let s = production_state(2048, 16);
    c.bench_function("rhs_uv n=2048", |b| b.iter(|| rhs_uv(black_box(&s), false)));
}

fn one_step(c: &mut Criterion) {
    let s = production_state(2048, 16);
    c.bench_function("step_rk4 n=2048", |b| {
        b.iter(|| step_rk4(black_box(&s), 1e-3).unwrap())
    });
}

fn short_run(c: &mut Criterion) {
    let s = production_state(512, 8);
    let cfg = SolverConfig {
        domain_length: 40.0,
        points: 512,
        final_time: 0.05,
        step: TimeStep::Fixed(1e-3),
        dealias: false,
        record_every: 10,
    };
    c.bench_function("integrate n=512 t=0.05", |b| {
        b.iter(|| integrate(black_box(&s), &cfg).unwrap())
    });
}

criterion_group!(kernels, smoothing_inverse, tendency, one_step, short_run);
criterion_main!(kernels);
