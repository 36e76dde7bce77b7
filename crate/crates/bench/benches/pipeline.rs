use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ffsum_core::rmt::haar_phi_values;
use ffsum_core::{
    count_points, l_polynomial, model_for, summatory_kfree, summatory_totient, HyperellipticCurve, Kind, LPolynomial,
};

fn worked() -> LPolynomial {
    let c = HyperellipticCurve::parse("q=5;f=0,1,0,1").unwrap();
    l_polynomial(&c.point_counts().unwrap()).unwrap()
}

fn series(c: &mut Criterion) {
    let l = worked();
    let mut group = c.benchmark_group("summatory");
    for xmax in [64usize, 256, 1024] {
        group.bench_with_input(BenchmarkId::new("kfree2", xmax), &xmax, |b, &x| {
            b.iter(|| summatory_kfree(black_box(&l), 2, x).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("totient", xmax), &xmax, |b, &x| {
            b.iter(|| summatory_totient(black_box(&l), x).unwrap())
        });
    }
    group.finish();
}

fn points(c: &mut Criterion) {
    let curve = HyperellipticCurve::parse("q=3^2;f=0:1,1:0,0:0,2:1,0:0,1:0").unwrap();
    let mut group = c.benchmark_group("count_points");
    for m in 1..=3u32 {
        group.bench_with_input(BenchmarkId::from_parameter(m), &m, |b, &m| {
            b.iter(|| count_points(black_box(&curve), m).unwrap())
        });
    }
    group.finish();
}

fn model(c: &mut Criterion) {
    let l = worked();
    let m = model_for(&l, Kind::Kfree(3)).unwrap();
    c.bench_function("model_build_k3", |b| b.iter(|| model_for(black_box(&l), Kind::Kfree(3)).unwrap()));
    c.bench_function("model_eval_1e4", |b| b.iter(|| (1..=10_000u64).map(|x| m.eval(x)).sum::<f64>()));
}

fn haar(c: &mut Criterion) {
    let mut group = c.benchmark_group("haar_phi_1e4");
    group.sample_size(10);
    for g in 1..=3usize {
        group.bench_with_input(BenchmarkId::from_parameter(g), &g, |b, &g| {
            b.iter(|| haar_phi_values(g, 10_000, 1).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, series, points, model, haar);
criterion_main!(benches);
