//! Sequential vs. rayon execution on the verification suites and on the
//! per-chart kernels of a single blow-up.
//!
//! `cargo bench -p toroidal-core --bench parallel`

use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use toroidal_core::fan::IdealSheafModel;
use toroidal_core::field::Field;
use toroidal_core::par::Execution;
use toroidal_core::resolve::{cone_multiplicities, resolve_sequence, CenterChoice, MinMaxMult, Strategy};
use toroidal_core::transform::controlled_transform_with;
use toroidal_core::verify::{commutation_suite, hull_suite, termination_suite, SuiteConfig};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suites");
    group.sample_size(10).measurement_time(Duration::from_secs(5));
    for (label, exec) in MODES {
        let cfg = SuiteConfig::new(7, 200, 500).with_exec(exec);
        group.bench_with_input(BenchmarkId::new("hull", label), &cfg, |b, cfg| {
            b.iter(|| black_box(hull_suite(cfg).unwrap()))
        });
        group.bench_with_input(BenchmarkId::new("commutation", label), &cfg, |b, cfg| {
            b.iter(|| black_box(commutation_suite(cfg).unwrap()))
        });
        let cfg = SuiteConfig::new(7, 100, 1_000).with_exec(exec);
        group.bench_with_input(BenchmarkId::new("termination", label), &cfg, |b, cfg| {
            b.iter(|| black_box(termination_suite(cfg, 3, 6).unwrap()))
        });
    }
    group.finish();
}

/// A model with many charts: a four-variable ideal part way through its
/// resolution.
fn wide_model() -> IdealSheafModel {
    let model = IdealSheafModel::from_strings(
        &["x", "y", "z", "w", "u"],
        &["x", "y", "z", "w"],
        &["x^5*y^2 + z^3*w*u", "y^4*z^2 - x*w^5 + u^2*x^3*y^3", "x^2*y^2*z^2*w^2 + u*z^6"],
        Field::Rational,
    )
    .unwrap();
    resolve_sequence(&model, &MinMaxMult, 25).unwrap().final_model
}

fn kernels(c: &mut Criterion) {
    let model = wide_model();
    let center = match MinMaxMult.select_center(&model).unwrap() {
        CenterChoice::Center { cone, .. } => cone,
        CenterChoice::Resolved => panic!("bench model resolved too early"),
    };
    let mut group = c.benchmark_group("kernels");
    group.sample_size(20);
    for (label, exec) in MODES {
        group.bench_function(BenchmarkId::new("cone_multiplicities", label), |b| {
            b.iter(|| black_box(cone_multiplicities(&model, exec).unwrap()))
        });
        group.bench_function(BenchmarkId::new("controlled_transform", label), |b| {
            b.iter(|| black_box(controlled_transform_with(&model, &center, exec).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, suites, kernels);
criterion_main!(benches);
