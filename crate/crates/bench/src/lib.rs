//! Fixtures shared by the benchmarks.

use num_complex::Complex64;
use polyret::measurement::{make_ensemble, make_init, measure_real, measure_with, random_signal, EnsembleKind, Measurements, SensingEnsemble};

/// A real Gaussian instance with a unit-norm target and an initial guess
/// at cosine `rho`.
pub struct RealInstance {
    pub ensemble: SensingEnsemble,
    pub xi: Vec<f64>,
    pub y: Measurements,
    pub x_init: Vec<f64>,
}

pub fn real_instance(n: usize, alpha: f64, rho: f64, seed: u64) -> RealInstance {
    let ensemble = make_ensemble(EnsembleKind::GaussianReal, n, alpha, seed).expect("valid ensemble");
    let xi: Vec<f64> = random_signal(n, seed ^ 0x5157);
    let y = measure_real(&ensemble, &xi).expect("real measurements");
    let x_init = make_init(&xi, rho, seed ^ 0x1417).expect("valid rho").x;
    RealInstance { ensemble, xi, y, x_init }
}

/// A coded-diffraction ensemble with `patterns` masks and a random complex
/// probe vector.
pub fn coded_instance(n: usize, patterns: usize, seed: u64) -> (SensingEnsemble, Vec<Complex64>, Measurements) {
    let ensemble = make_ensemble(EnsembleKind::CodedDiffraction, n, patterns as f64, seed).expect("valid ensemble");
    let x: Vec<Complex64> = random_signal(n, seed ^ 0x5157);
    let y = measure_with(ensemble.complex().expect("complex operator"), &x).expect("measurements");
    (ensemble, x, y)
}
