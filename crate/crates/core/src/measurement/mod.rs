//! Signals, sensing ensembles, magnitude measurements and error metrics.

mod ensemble;
mod init;
mod metrics;

use num_complex::Complex64;

pub use ensemble::{
    coded_patterns, gaussian_rows, make_ensemble, EnsembleKind, EnsembleOperator, SensingEnsemble,
};
pub use init::{
    make_init, random_init, spectral_init, InitialGuess, OmegaName, Preprocessing, SpectralInit,
    SPECTRAL_RESIDUAL_TOL,
};
pub use metrics::{aligned_coordinates, cosine_similarity, nmse, signed_coordinates};

use crate::error::{invalid, Error, Result};
use crate::operator::LinearOperator;
use crate::rng;
use crate::scalar::{self, Scalar};

pub type Signal<T> = Vec<T>;

/// Magnitude measurements `y_i = |<a_i, x>|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurements(Vec<f64>);

impl Measurements {
    pub fn new(y: Vec<f64>) -> Result<Self> {
        if let Some(bad) = y.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(invalid("y", format!("magnitudes must be finite and nonnegative, found {bad}")));
        }
        Ok(Self(y))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().cloned().fold(0.0, f64::max)
    }

    /// Same measurements multiplied by `t >= 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|v| v * t).collect())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// `y = |A x|` for an arbitrary operator.
pub fn measure_with<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, x: &[T]) -> Result<Measurements> {
    if x.len() != op.cols() {
        return Err(Error::DimensionMismatch {
            expected: op.cols(),
            got: x.len(),
        });
    }
    let mut z = vec![T::zero(); op.rows()];
    op.apply(x, &mut z);
    Ok(Measurements(z.into_iter().map(Scalar::abs).collect()))
}

/// Measures a real signal with a real ensemble.
pub fn measure_real(ensemble: &SensingEnsemble, x: &[f64]) -> Result<Measurements> {
    let a = ensemble
        .real()
        .ok_or_else(|| invalid("ensemble", "real signal requires a real Gaussian ensemble"))?;
    measure_with(a, x)
}

/// Measures a complex signal with a complex ensemble (Gaussian or coded diffraction).
pub fn measure_complex(ensemble: &SensingEnsemble, x: &[Complex64]) -> Result<Measurements> {
    let a = ensemble
        .complex()
        .ok_or_else(|| invalid("ensemble", "complex signal requires a complex ensemble"))?;
    measure_with(a, x)
}

/// Unit-norm Gaussian target signal.
pub fn random_signal<T: Scalar>(n: usize, seed: u64) -> Signal<T> {
    let mut gen = rng::stream(seed);
    let mut x: Vec<T> = (0..n).map(|_| T::sample_normal(&mut gen)).collect();
    let nx = scalar::norm(&x);
    x.iter_mut().for_each(|v| *v = v.scale(1.0 / nx));
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::DenseMatrix;

    #[test]
    fn measure_basic_cases() {
        let a = DenseMatrix::<f64>::identity(2);
        let y = measure_with(&a, &[1.0, 0.0]).unwrap();
        assert_eq!(y.as_slice()[0], 1.0);
        let y = measure_with(&a, &[0.0, 0.0]).unwrap();
        assert!(y.as_slice().iter().all(|&v| v == 0.0));
        assert!(measure_with(&a, &[1.0]).is_err());
    }

    #[test]
    fn measure_matches_row_oracle() {
        let e = make_ensemble(EnsembleKind::GaussianReal, 2, 1.5, 99).unwrap();
        assert_eq!(e.rows(), 3);
        let a = e.real().unwrap();
        let y = measure_real(&e, &[1.0, -2.0]).unwrap();
        for i in 0..3 {
            let r = a.row_slice(i);
            assert!((y.as_slice()[i] - (r[0] - 2.0 * r[1]).abs()).abs() < 1e-14);
        }
    }

    #[test]
    fn ensembles_are_deterministic() {
        let a = make_ensemble(EnsembleKind::GaussianReal, 4, 2.0, 7).unwrap();
        let b = make_ensemble(EnsembleKind::GaussianReal, 4, 2.0, 7).unwrap();
        assert_eq!((a.rows(), a.cols()), (8, 4));
        assert_eq!(a.real().unwrap(), b.real().unwrap());
        let c = make_ensemble(EnsembleKind::GaussianReal, 4, 2.0, 8).unwrap();
        assert_ne!(a.real().unwrap(), c.real().unwrap());
    }

    #[test]
    fn coded_diffraction_shape_and_rows() {
        let e = make_ensemble(EnsembleKind::CodedDiffraction, 8, 3.0, 1).unwrap();
        assert_eq!(e.rows(), 24);
        let EnsembleOperator::Coded(cdp) = e.operator() else {
            panic!("expected coded diffraction operator");
        };
        assert_eq!(cdp.patterns(), 3);
        assert!(cdp.masks().iter().flatten().all(|&s| s == 1.0 || s == -1.0));
        let op = e.complex().unwrap();
        for i in 0..24 {
            let (l, k) = (i / 8, i % 8);
            let row = op.row(i);
            for (j, r) in row.iter().enumerate() {
                let f = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (k * j) as f64 / 8.0);
                assert!((r - f * cdp.masks()[l][j]).norm() < 1e-12);
            }
        }
        assert!(make_ensemble(EnsembleKind::CodedDiffraction, 8, 2.5, 1).is_err());
    }

    #[test]
    fn measurements_reject_negative_values() {
        assert!(Measurements::new(vec![1.0, -0.1]).is_err());
        assert!(Measurements::new(vec![f64::NAN]).is_err());
    }
}
