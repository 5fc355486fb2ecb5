use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use selfsim::isomorphism::{distortion_scan, holder_exponent, Profile, ProfileOptions, ScanOptions};
use selfsim::{bounded_turning_constant, corpus, jordan_check, Config, LinearZipper, Parametrization, TurningOptions};

fn polyline(c: &mut Criterion) {
    let cfg = Config::default();
    let koch = corpus::koch();
    let mut group = c.benchmark_group("polyline");
    for depth in [4, 6, 8] {
        group.bench_with_input(BenchmarkId::new("koch", depth), &depth, |b, &d| {
            b.iter(|| koch.polyline(black_box(d), &cfg).unwrap())
        });
    }
    group.finish();
}

fn evaluate(c: &mut Criterion) {
    let g = Parametrization::new(&corpus::cesaro(0.5, 0.3)).unwrap();
    c.bench_function("evaluate/cesaro/1e-10", |b| b.iter(|| g.evaluate(black_box(0.3141592653589793), 1e-10).unwrap()));
}

fn jordan(c: &mut Criterion) {
    let cfg = Config::default();
    let mut group = c.benchmark_group("jordan_check");
    group.sample_size(10);
    for (name, z, depth) in [("koch", corpus::koch(), 5), ("cesaro", corpus::cesaro(0.5, 0.3), 10)] {
        group.bench_function(BenchmarkId::new(name, depth), |b| b.iter(|| jordan_check(&z, depth, 0.0, &cfg).unwrap()));
    }
    group.finish();
}

fn turning(c: &mut Criterion) {
    let cfg = Config::default();
    let koch = corpus::koch();
    let linear = LinearZipper::for_zipper(&koch);
    let mut group = c.benchmark_group("bounded_turning");
    group.sample_size(10);
    group.bench_function("koch/lower/6", |b| {
        b.iter(|| bounded_turning_constant(&koch, &linear, &TurningOptions::new(6, 200), &cfg).unwrap())
    });
    group.bench_function("koch/certified/6", |b| {
        b.iter(|| bounded_turning_constant(&koch, &linear, &TurningOptions::new(6, 200).certified(), &cfg).unwrap())
    });
    group.finish();
}

fn isomorphism(c: &mut Criterion) {
    let cfg = Config::default();
    let profile = |z| Profile::analyze(&z, &ProfileOptions::for_zipper(&z), &cfg).unwrap();
    let (a, b) = (profile(corpus::linear_half()), profile(corpus::linear_third()));
    let options = ScanOptions::new(1000, 8, 0);
    let mut group = c.benchmark_group("isomorphism");
    group.sample_size(10);
    group.bench_function("distortion_scan/linear/1000", |bench| {
        bench.iter(|| distortion_scan(&a, &b, &options, &cfg).unwrap())
    });
    group.bench_function("holder_exponent/m=4", |bench| {
        bench.iter(|| holder_exponent(black_box(&[0.2, 0.3, 0.25, 0.25]), black_box(&[0.1, 0.4, 0.3, 0.2])).unwrap())
    });
    group.finish();
}

criterion_group!(benches, polyline, evaluate, jordan, turning, isomorphism);
criterion_main!(benches);
