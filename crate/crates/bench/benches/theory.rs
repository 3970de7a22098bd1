use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use polyret::theory::{c_d, c_star, predict_nmse, r_max, rho_c, AlphaContext};

fn closed_forms(c: &mut Criterion) {
    c.bench_function("c_d", |b| b.iter(|| c_d(black_box(0.3), black_box(0.7))));
    c.bench_function("rho_c", |b| b.iter(|| rho_c(black_box(4.0)).unwrap()));
}

fn root_finders(c: &mut Criterion) {
    let ctx = AlphaContext::new(3.0).unwrap();
    c.bench_function("predict_nmse alpha=3 rho=0.4", |b| b.iter(|| predict_nmse(&ctx, black_box(0.4)).unwrap()));
    c.bench_function("c_star alpha=4", |b| b.iter(|| c_star(black_box(4.0)).unwrap()));
    c.bench_function("r_max alpha=6 s=0.5", |b| b.iter(|| r_max(black_box(6.0), black_box(0.5)).unwrap()));
}

criterion_group!(benches, closed_forms, root_finders);
criterion_main!(benches);
