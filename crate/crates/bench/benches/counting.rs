use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dimers::asymptotics::catalan_constant;
use dimers::kasteleyn::{count_rectangle_det, torus_determinants, TorusMode};
use dimers::oracle::{enumerate_matchings, EnumerationLimits};
use dimers::spectral::{count_rectangle_spectral, default_precision};
use dimers::GridSpec;
use dimers_bench::{ENUMERATION_SIDES, SQUARE_SIDES};

fn rectangles(c: &mut Criterion) {
    let mut group = c.benchmark_group("square");
    group.sample_size(10);
    for n in SQUARE_SIDES {
        group.bench_with_input(BenchmarkId::new("determinant", n), &n, |b, &n| {
            b.iter(|| count_rectangle_det(black_box(n), n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("spectral", n), &n, |b, &n| {
            b.iter(|| count_rectangle_spectral(black_box(n), n, default_precision(n, n)).unwrap())
        });
    }
    let limits = EnumerationLimits::default();
    for n in ENUMERATION_SIDES {
        group.bench_with_input(BenchmarkId::new("enumerate", n), &n, |b, &n| {
            b.iter(|| enumerate_matchings(GridSpec::rectangle(black_box(n), n), &limits).unwrap())
        });
    }
    group.finish();
}

fn tori(c: &mut Criterion) {
    let mut group = c.benchmark_group("torus");
    group.sample_size(10);
    let limits = EnumerationLimits::default();
    for n in [8usize, 12, 16] {
        group.bench_with_input(BenchmarkId::new("determinants", n), &n, |b, &n| {
            b.iter(|| torus_determinants(black_box(n), n, TorusMode::Validated, &limits).unwrap())
        });
    }
    group.finish();
}

fn catalan(c: &mut Criterion) {
    let mut group = c.benchmark_group("catalan");
    for bits in [64u32, 256, 1024] {
        group.bench_with_input(BenchmarkId::from_parameter(bits), &bits, |b, &bits| {
            b.iter(|| catalan_constant(black_box(bits)))
        });
    }
    group.finish();
}

criterion_group!(benches, rectangles, tori, catalan);
criterion_main!(benches);
