use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use torsion_core::degeneration::logw_coefficient;
use torsion_core::degeneration::quadrature::{quadrature_a, HPreset};
use torsion_core::genera::{bk_genus, r_genus};
use torsion_core::series::{standard_series, StandardSeries};
use torsion_core::suite::{run_suite, Suite, SuiteConfig};
use torsion_core::torsion::delta_table;
use torsion_core::{Rational, Series};

fn series(c: &mut Criterion) {
    c.bench_function("todd series order 24", |b| {
        b.iter(|| standard_series::<Rational>(&StandardSeries::Todd, black_box(24)))
    });
    let t: Series<Rational> = standard_series(&StandardSeries::Todd, 16);
    c.bench_function("series division order 16", |b| {
        b.iter(|| black_box(&t).recip().unwrap())
    });
    c.bench_function("R-genus order 12", |b| b.iter(|| r_genus(black_box(12))));
}

fn torsion(c: &mut Criterion) {
    let bk = bk_genus(9);
    c.bench_function("delta table BK n=4", |b| {
        b.iter(|| delta_table(black_box(&bk), 4, -9..=5).unwrap())
    });
}

fn suites(c: &mut Criterion) {
    let cfg = SuiteConfig::default();
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    for suite in [Suite::Koszul, Suite::Sigma, Suite::Closedness] {
        g.bench_function(suite.name(), |b| b.iter(|| run_suite(suite, &cfg).unwrap()));
    }
    g.finish();
}

fn degeneration(c: &mut Criterion) {
    let h = HPreset::by_name("rational1").unwrap();
    let skew = HPreset::by_name("skew").unwrap();
    let mut g = c.benchmark_group("quadrature");
    g.sample_size(10);
    g.bench_function("a radial 2048", |b| {
        b.iter(|| quadrature_a(&h, black_box(2048)).unwrap())
    });
    g.bench_function("a tensor 1024", |b| {
        b.iter(|| quadrature_a(&skew, black_box(1024)).unwrap())
    });
    g.finish();
    c.bench_function("logw coefficient", |b| {
        b.iter(|| logw_coefficient(black_box(5), black_box(5)).unwrap())
    });
}

criterion_group!(benches, series, torsion, suites, degeneration);
criterion_main!(benches);
