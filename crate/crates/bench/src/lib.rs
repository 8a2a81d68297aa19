//! Benchmarks for the simulator kernels, shared by the `simulator` bench
//! target.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};
use qsearch::count::{fast_distribution, phase_estimate_fast};
use qsearch::lowerbound::{random_algorithm, verify};
use qsearch::rng::trial_rng;
use qsearch::{Amplifier, ComplexMatrix, HadamardTransform, OracleSpec, StateVector};

pub fn state_kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("state");
    for n in [10u32, 16, 20] {
        let oracle = OracleSpec::new(n, [3, 17]).unwrap();
        let mut state = StateVector::uniform(n).unwrap();
        group.bench_with_input(BenchmarkId::new("diffusion", n), &n, |b, &n| {
            b.iter(|| state.apply_diffusion(n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("grover_iteration", n), &n, |b, _| {
            b.iter(|| state.apply_grover_iteration(&oracle).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("inverse_qft", n), &n, |b, &n| {
            b.iter(|| state.inverse_qft(0, n).unwrap())
        });
    }
    group.finish();
}

pub fn haar(c: &mut Criterion) {
    let mut group = c.benchmark_group("haar_random");
    for dim in [16usize, 64, 256] {
        let mut rng = trial_rng(1, 0);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &dim, |b, &dim| {
            b.iter(|| ComplexMatrix::haar_random(black_box(dim), &mut rng))
        });
    }
    group.finish();
}

pub fn phase_estimation(c: &mut Criterion) {
    let mut group = c.benchmark_group("phase_estimation");
    let oracle = OracleSpec::new(12, 0..40).unwrap();
    let amp = Amplifier::borrowing(HadamardTransform::new(12), &oracle).unwrap();
    let mut rng = trial_rng(2, 0);
    for t in [8u32, 16, 24] {
        group.bench_with_input(BenchmarkId::new("fast_sample", t), &t, |b, &t| {
            b.iter(|| phase_estimate_fast(&amp, t, &mut rng).unwrap())
        });
    }
    group.bench_function("fast_distribution_t12", |b| {
        b.iter(|| fast_distribution(black_box(amp.theta()), 12).unwrap())
    });
    group.finish();
}

pub fn hybrid(c: &mut Criterion) {
    let mut group = c.benchmark_group("hybrid_verify");
    group.sample_size(10);
    for k in [1usize, 4] {
        let alg = random_algorithm(4, 5, k, &mut trial_rng(3, k as u64)).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(k), &alg, |b, alg| {
            b.iter(|| verify(alg).unwrap())
        });
    }
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    state_kernels(c);
    haar(c);
    phase_estimation(c);
    hybrid(c);
}
