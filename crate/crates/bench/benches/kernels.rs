use criterion::{criterion_group, criterion_main, Criterion};
use margin_mcmc::{build_kernel, check_stationarity, tv_distance_curve, Algorithm};
use margin_mcmc_bench::space;

fn enumeration(c: &mut Criterion) {
    c.bench_function("enumerate_4x4_all_twos", |b| b.iter(|| space(&[2, 2, 2, 2], &[2, 2, 2, 2])));
    c.bench_function("enumerate_5x5_all_twos", |b| b.iter(|| space(&[2; 5], &[2; 5])));
}

fn kernels(c: &mut Criterion) {
    let sp = space(&[2, 2, 2, 2], &[2, 2, 2, 2]);
    let mut group = c.benchmark_group("exact_kernel_4x4");
    for algorithm in Algorithm::ALL {
        group.bench_function(algorithm.name(), |b| b.iter(|| build_kernel(&sp, algorithm).unwrap()));
    }
    group.finish();
    let p = build_kernel(&sp, Algorithm::RectangleLoop).unwrap();
    c.bench_function("stationarity_4x4", |b| b.iter(|| check_stationarity(&p)));
    c.bench_function("tv_curve_4x4_k60", |b| b.iter(|| tv_distance_curve(&p, 60)));
}

criterion_group!(benches, enumeration, kernels);
criterion_main!(benches);
