use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use equipoise::{
    decompose_samples, normalize, potential_of_density, simulate, solve_maxent,
    stochastic_intensity, Estimator, Grid,
};
use equipoise_bench::*;

fn transforms(c: &mut Criterion) {
    let u = harmonic();
    let mut group = c.benchmark_group("normalize");
    for n in [1001, 4001, 16001] {
        let grid = normal_grid(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &grid, |b, grid| {
            b.iter(|| normalize(black_box(&u), grid).unwrap())
        });
    }
    group.finish();

    let (gamma, grid) = gamma();
    let f = normalize(&gamma, &grid).unwrap();
    c.bench_function("stochastic_intensity/gamma", |b| {
        b.iter(|| stochastic_intensity(black_box(&f)))
    });
    c.bench_function("potential_of_density/gamma", |b| {
        b.iter(|| potential_of_density(black_box(&f)))
    });
}

fn maxent(c: &mut Criterion) {
    let problem = square_moment_problem();
    c.bench_function("solve_maxent/square", |b| {
        b.iter(|| solve_maxent(black_box(&problem)).unwrap())
    });
}

fn simulation(c: &mut Criterion) {
    let config = short_simulation(20_000);
    let mut group = c.benchmark_group("simulate");
    group.sample_size(10);
    group.bench_function("harmonic_20k_steps", |b| {
        b.iter(|| simulate(black_box(&config)).unwrap())
    });
    group.finish();
}

fn decomposition(c: &mut Criterion) {
    let samples = exponential_quantiles(100_000);
    let grid = Grid::continuous(0.0, 10.0, 1001).unwrap();
    let mut group = c.benchmark_group("decompose");
    group.sample_size(20);
    group.bench_function("histogram", |b| {
        b.iter(|| {
            decompose_samples(
                black_box(&samples),
                &grid,
                Estimator::Histogram { bins: 100 },
            )
            .unwrap()
        })
    });
    group.bench_function("kernel", |b| {
        b.iter(|| {
            decompose_samples(
                black_box(&samples),
                &grid,
                Estimator::Kernel { bandwidth: None },
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, transforms, maxent, simulation, decomposition);
criterion_main!(benches);
