use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use nprule_core::oracle::{check_theorem3_fixed_point, mc_power};
use nprule_core::solvers::presets::*;
use nprule_core::{power, solve, ExponentialFamily, IntervalRule, SolverConfig};

fn solvers(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let mut g = c.benchmark_group("solve");
    g.sample_size(10);
    g.bench_function("gaussian_point", |b| {
        b.iter(|| solve(black_box(&gaussian_prospect(2.0 / 3.0)), &cfg).unwrap())
    });
    g.bench_function("binomial_point", |b| {
        b.iter(|| solve(black_box(&binomial_prospect(1.05)), &cfg).unwrap())
    });
    g.bench_function("integrated", |b| {
        b.iter(|| solve(black_box(&composite_integrated()), &cfg).unwrap())
    });
    g.bench_function("supremum", |b| {
        b.iter(|| solve(black_box(&composite_supremum(5.0)), &cfg).unwrap())
    });
    g.finish();
}

fn primitives(c: &mut Criterion) {
    let fam = ExponentialFamily::Gaussian { variance: 1.0 };
    let rule = IntervalRule::closed(-1.8, 1.5).unwrap();
    c.bench_function("power_gaussian", |b| {
        b.iter(|| power(&fam, black_box(0.3), &rule).unwrap())
    });
    let bin = ExponentialFamily::Binomial { trials: 10 };
    let rule_b = IntervalRule::new(2.0, 8.0, 0.87, 0.68).unwrap();
    c.bench_function("power_binomial", |b| {
        b.iter(|| power(&bin, black_box(0.45), &rule_b).unwrap())
    });
}

fn oracles(c: &mut Criterion) {
    let cfg = SolverConfig::default();
    let spec = composite_supremum(5.0);
    let r = solve(&spec, &cfg).unwrap();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("fixed_point_400", |b| {
        b.iter(|| check_theorem3_fixed_point(&spec, black_box(&r), 400).unwrap())
    });
    g.bench_function("mc_power_1e6", |b| {
        b.iter(|| mc_power(&spec.family, -0.2, black_box(&r.rule), 1_000_000, 1).unwrap())
    });
    g.finish();
}

criterion_group!(benches, solvers, primitives, oracles);
criterion_main!(benches);
