use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use polyret::algorithms::{phasemax, phaselamp, wphaselamp, LampOptions};
use polyret::measurement::{spectral_init, Preprocessing};
use polyret::solver::SolverOptions;
use polyret_bench::{coded_instance, real_instance};

fn phasemax_solve(c: &mut Criterion) {
    let inst = real_instance(100, 5.0, 0.6, 1);
    let a = inst.ensemble.real().unwrap();
    c.bench_function("phasemax n=100 alpha=5", |b| {
        b.iter(|| phasemax(a, &inst.y, black_box(&inst.x_init), &SolverOptions::default()).unwrap())
    });
}

fn lamp_variants(c: &mut Criterion) {
    let inst = real_instance(64, 4.0, 0.2, 2);
    let a = inst.ensemble.real().unwrap();
    let mut g = c.benchmark_group("lamp n=64 alpha=4");
    g.sample_size(10);
    g.bench_function("phaselamp", |b| {
        b.iter(|| phaselamp(a, &inst.y, black_box(&inst.x_init), &LampOptions::default()).unwrap())
    });
    g.bench_function("wphaselamp", |b| {
        b.iter(|| wphaselamp(a, &inst.y, black_box(&inst.x_init), &Preprocessing::Square, &LampOptions::default()).unwrap())
    });
    g.finish();
}

fn coded_operator(c: &mut Criterion) {
    let (ens, x, y) = coded_instance(1024, 6, 3);
    let op = ens.complex().unwrap();
    let mut z = vec![Complex64::new(0.0, 0.0); op.rows()];
    let mut back = vec![Complex64::new(0.0, 0.0); op.cols()];
    c.bench_function("coded diffraction apply n=1024 L=6", |b| b.iter(|| op.apply(black_box(&x), &mut z)));
    c.bench_function("coded diffraction adjoint n=1024 L=6", |b| b.iter(|| op.adjoint(black_box(&z), &mut back)));
    c.bench_function("spectral init n=1024 L=6", |b| {
        b.iter(|| spectral_init(op, &y, &Preprocessing::Square, 200, None).unwrap())
    });
}

criterion_group!(benches, phasemax_solve, lamp_variants, coded_operator);
criterion_main!(benches);
