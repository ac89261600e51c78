use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use lagflux_bench::{coupled, dam_break, debris_strip, sod_states};
use lagflux_core::coupling;
use lagflux_core::debris::{debris_convective_step, debris_source_update, DebrisParams};
use lagflux_core::euler::{euler_step, hll_lagrange_contact, GasParams};
use lagflux_core::swe::{stable_dt, swe_step, DryVelocityField};
use lagflux_core::{Boundaries, LimiterParams};

fn riemann(c: &mut Criterion) {
    let (_, _, states) = sod_states(2);
    let gas = GasParams::default();
    c.bench_function("hll_lagrange_contact", |b| {
        b.iter(|| hll_lagrange_contact(black_box(&states[0]), black_box(&states[1]), gas))
    });
}

fn euler(c: &mut Criterion) {
    let (tube, grid, states) = sod_states(384);
    let limiter = LimiterParams { beta: 1.5 };
    c.bench_function("euler_step/384", |b| {
        b.iter(|| euler_step(black_box(&states), &grid, tube.gas, limiter, tube.cfl))
    });
}

fn swe(c: &mut Criterion) {
    let (water, topo, params) = dam_break(100, 100);
    let dry = DryVelocityField::zeros(water.grid.len());
    let dt = stable_dt(&water, &dry, &params).unwrap();
    c.bench_function("swe_step/100x100", |b| {
        b.iter_batched(
            || (water.clone(), dry.clone()),
            |(mut w, mut d)| swe_step(&mut w, &topo, &mut d, &params, dt),
            BatchSize::LargeInput,
        )
    });
}

fn debris(c: &mut Criterion) {
    let (water, _, _) = dam_break(100, 100);
    let state = debris_strip(water.grid);
    let bcs = Boundaries::default();
    let dt = 0.25 * water.grid.dx / state.max_speed();
    c.bench_function("debris_convective_step/100x100", |b| {
        b.iter_batched(
            || state.clone(),
            |mut s| debris_convective_step(&mut s, &bcs, dt),
            BatchSize::LargeInput,
        )
    });
    let p = DebrisParams::default();
    c.bench_function("debris_source_update", |b| {
        b.iter(|| debris_source_update(black_box(1.3), black_box(0.7), black_box(0.02), 1e-3, &p))
    });
}

fn coupled_step(c: &mut Criterion) {
    let (state, topo, params) = coupled(100, 100, 2000);
    let dt = coupling::stable_dt(&state, &params).unwrap();
    c.bench_function("coupled_step/100x100+2000", |b| {
        b.iter_batched(
            || state.clone(),
            |mut s| coupling::coupled_step(&mut s, &topo, &params, dt),
            BatchSize::LargeInput,
        )
    });
}

criterion_group!(kernels, riemann, euler, swe, debris, coupled_step);
criterion_main!(kernels);
