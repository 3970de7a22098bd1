//! Initial guesses: controlled-cosine construction, random draws and the
//! weighted spectral method.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operator::{self, LinearOperator};
use crate::rng;
use crate::scalar::{self, Scalar};

use super::Measurements;

#[derive(Clone, Debug, PartialEq)]
pub struct InitialGuess<T> {
    pub x: Vec<T>,
    pub rho_target: Option<f64>,
}

fn normalize<T: Scalar>(v: &mut [T]) -> f64 {
    let nv = scalar::norm(v);
    if nv > 0.0 {
        v.iter_mut().for_each(|x| *x = x.scale(1.0 / nv));
    }
    nv
}

/// Unit-norm guess whose cosine similarity with `xi` is exactly `rho`:
/// `x = rho xi/||xi|| + sqrt(1 - rho^2) w` with `w` a random unit vector
/// orthogonal to `xi`.
pub fn make_init<T: Scalar>(xi: &[T], rho: f64, seed: u64) -> Result<InitialGuess<T>> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(invalid("rho", format!("cosine similarity must lie in [0, 1], got {rho}")));
    }
    let xi_norm = scalar::norm(xi);
    if xi_norm == 0.0 {
        return Err(Error::ZeroTarget);
    }
    let n = xi.len();
    let unit: Vec<T> = scalar::scaled(xi, 1.0 / xi_norm);
    let mut gen = rng::stream(seed);
    let mut w: Vec<T> = (0..n).map(|_| T::sample_normal(&mut gen)).collect();
    // two Gram-Schmidt passes bring <w, xi> down to rounding level
    for _ in 0..2 {
        let c = scalar::dot(&unit, &w);
        scalar::axpy(-c, &unit, &mut w);
    }
    let w_norm = normalize(&mut w);
    if w_norm == 0.0 || n == 1 {
        w.iter_mut().for_each(|v| *v = T::zero());
    }
    let tail = (1.0 - rho * rho).max(0.0).sqrt();
    let mut x: Vec<T> = unit
        .iter()
        .zip(&w)
        .map(|(&u, &wv)| u.scale(rho) + wv.scale(tail))
        .collect();
    if scalar::norm(&x) == 0.0 {
        // n = 1 and rho = 0: no direction orthogonal to xi exists
        return Err(invalid("rho", "a zero-cosine guess needs n >= 2"));
    }
    normalize(&mut x);
    Ok(InitialGuess {
        x,
        rho_target: Some(rho),
    })
}

/// Unit-norm Gaussian guess drawn independently of everything else.
pub fn random_init<T: Scalar>(n: usize, seed: u64) -> InitialGuess<T> {
    let mut gen = rng::stream(seed);
    let mut x: Vec<T> = (0..n).map(|_| T::sample_normal(&mut gen)).collect();
    normalize(&mut x);
    InitialGuess { x, rho_target: None }
}

/// Measurement preprocessing function `omega` used by the weighted spectral
/// matrix `D_m = (1/m) sum_i omega(y_i) a_i a_i^H`.
#[derive(Clone)]
pub enum Preprocessing {
    /// `omega(y) = y^2`
    Square,
    /// `omega(y) = y^2 * 1{y <= tau * mean(y)}`
    Truncated { tau: f64 },
    /// User-supplied map from the full measurement vector to weights.
    Custom {
        name: String,
        weights: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
    },
}

impl fmt::Debug for Preprocessing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl Default for Preprocessing {
    fn default() -> Self {
        Preprocessing::Square
    }
}

impl Preprocessing {
    pub const TRUNCATION_TAU: f64 = 3.0;

    pub fn truncated() -> Self {
        Preprocessing::Truncated {
            tau: Self::TRUNCATION_TAU,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Preprocessing::Square => "square".into(),
            Preprocessing::Truncated { .. } => "truncated".into(),
            Preprocessing::Custom { name, .. } => name.clone(),
        }
    }

    pub fn weights(&self, y: &[f64]) -> Vec<f64> {
        match self {
            Preprocessing::Square => y.iter().map(|v| v * v).collect(),
            Preprocessing::Truncated { tau } => {
                let mean = y.iter().sum::<f64>() / y.len().max(1) as f64;
                let cut = tau * mean;
                y.iter()
                    .map(|&v| if v <= cut { v * v } else { 0.0 })
                    .collect()
            }
            Preprocessing::Custom { weights, .. } => weights(y),
        }
    }
}

impl std::str::FromStr for Preprocessing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "square" | "y2" | "y^2" => Ok(Preprocessing::Square),
            "truncated" | "trunc" => Ok(Preprocessing::truncated()),
            other => Err(invalid("omega", format!("unknown preprocessing function `{other}`"))),
        }
    }
}

/// Serializable name of a shipped preprocessing function.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaName {
    #[default]
    Square,
    Truncated,
}

impl std::str::FromStr for OmegaName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.parse::<Preprocessing>()? {
            Preprocessing::Square => Ok(OmegaName::Square),
            _ => Ok(OmegaName::Truncated),
        }
    }
}

impl From<OmegaName> for Preprocessing {
    fn from(name: OmegaName) -> Self {
        match name {
            OmegaName::Square => Preprocessing::Square,
            OmegaName::Truncated => Preprocessing::truncated(),
        }
    }
}

/// Applies `D v = (1/m) A^H (w .* (A v))`.
pub(crate) fn weighted_gram_apply<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    weights: &[f64],
    v: &[T],
    scratch: &mut [T],
    out: &mut [T],
) {
    let inv_m = 1.0 / op.rows() as f64;
    op.apply_map_adjoint(v, scratch, &mut |i, z| z.scale(weights[i] * inv_m), out);
}

#[derive(Clone, Debug)]
pub struct SpectralInit<T> {
    pub guess: InitialGuess<T>,
    pub eigenvalue: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Relative eigen-residual at which power iteration stops.
pub const SPECTRAL_RESIDUAL_TOL: f64 = 1e-8;

/// Leading eigenvector of the weighted matrix `D_m` by power iteration.
///
/// When `reference` is given (test mode) the global sign/phase is chosen so
/// that `<x_init, reference>` is real and nonnegative.
pub fn spectral_init<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &Measurements,
    omega: &Preprocessing,
    iters: usize,
    reference: Option<&[T]>,
) -> Result<SpectralInit<T>> {
    if iters == 0 {
        return Err(invalid("iters", "power iteration needs at least one step"));
    }
    if y.len() != op.rows() {
        return Err(Error::DimensionMismatch {
            expected: op.rows(),
            got: y.len(),
        });
    }
    if y.as_slice().iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroMeasurements);
    }
    let n = op.cols();
    let m = op.rows();
    let weights = omega.weights(y.as_slice());
    // Shift so the algebraically largest eigenvalue also has the largest
    // magnitude when some weights are negative.
    let min_w = weights.iter().cloned().fold(f64::INFINITY, f64::min);
    let shift = if min_w < 0.0 {
        let a_norm = operator::spectral_norm(op, 100);
        -min_w * a_norm * a_norm / m as f64
    } else {
        0.0
    };

    let mut gen = rng::stream(0x5eed_5eed);
    let mut v: Vec<T> = (0..n).map(|_| T::sample_normal(&mut gen)).collect();
    normalize(&mut v);
    let mut dv = vec![T::zero(); n];
    let mut scratch = vec![T::zero(); m];
    let mut lambda = 0.0;
    let mut residual = f64::INFINITY;
    let mut it = 0;
    while it < iters {
        it += 1;
        weighted_gram_apply(op, &weights, &v, &mut scratch, &mut dv);
        lambda = scalar::dot(&v, &dv).re();
        let res_sq: f64 = dv
            .iter()
            .zip(&v)
            .map(|(&d, &x)| (d - x.scale(lambda)).abs_sqr())
            .sum();
        residual = res_sq.sqrt() / lambda.abs().max(f64::MIN_POSITIVE);
        if residual <= SPECTRAL_RESIDUAL_TOL {
            break;
        }
        for (vi, &di) in v.iter_mut().zip(&dv) {
            *vi = di + vi.scale(shift);
        }
        if normalize(&mut v) == 0.0 {
            return Err(Error::Numerical("power iteration collapsed to zero".into()));
        }
    }
    if let Some(xi) = reference {
        let rot = scalar::dot(&v, xi).phase();
        v.iter_mut().for_each(|x| *x = rot * *x);
    }
    Ok(SpectralInit {
        guess: InitialGuess {
            x: v,
            rho_target: None,
        },
        eigenvalue: lambda,
        residual,
        iterations: it,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::{cosine_similarity, measure_with};
    use crate::operator::DenseMatrix;
    use num_complex::Complex64;

    #[test]
    fn make_init_extremes() {
        let xi = vec![3.0, 0.0, -4.0, 1.0];
        let g = make_init(&xi, 1.0, 3).unwrap();
        let nx = scalar::norm(&xi);
        for (a, b) in g.x.iter().zip(&xi) {
            assert!((a - b / nx).abs() < 1e-15);
        }
        let g = make_init(&xi, 0.0, 3).unwrap();
        assert!(scalar::dot(&g.x, &xi).abs() < 1e-12);
        assert!((scalar::norm(&g.x) - 1.0).abs() < 1e-14);
        assert!(make_init(&xi, 1.2, 3).is_err());
        assert!(make_init(&xi, -0.1, 3).is_err());
    }

    #[test]
    fn make_init_hits_target_cosine() {
        let xi: Vec<f64> = random_init(1000, 11).x;
        let g = make_init(&xi, 0.63, 5).unwrap();
        let rho = cosine_similarity(&g.x, &xi).unwrap();
        assert!((rho - 0.63).abs() < 1e-12, "rho = {rho}");
        assert!((scalar::norm(&g.x) - 1.0).abs() < 1e-12);

        let xi_c: Vec<Complex64> = random_init(300, 12).x;
        let g = make_init(&xi_c, 0.4, 6).unwrap();
        assert!((cosine_similarity(&g.x, &xi_c).unwrap() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn spectral_init_on_identity_picks_dominant_coordinate() {
        let n = 5;
        let a = DenseMatrix::<f64>::identity(n);
        let mut xi = vec![0.0; n];
        xi[0] = 1.0;
        let y = measure_with(&a, &xi).unwrap();
        let s = spectral_init(&a, &y, &Preprocessing::Square, 100, Some(&xi)).unwrap();
        assert!((s.guess.x[0] - 1.0).abs() < 1e-12);
        assert!(s.residual <= SPECTRAL_RESIDUAL_TOL);
    }

    #[test]
    fn spectral_init_rejects_zero_measurements() {
        let a = DenseMatrix::<f64>::identity(3);
        let y = Measurements::new(vec![0.0; 3]).unwrap();
        assert!(matches!(
            spectral_init(&a, &y, &Preprocessing::Square, 10, None::<&[f64]>),
            Err(Error::ZeroMeasurements)
        ));
    }

    #[test]
    fn truncation_drops_outliers() {
        let w = Preprocessing::truncated().weights(&[1.0, 1.0, 1.0, 10.0]);
        // mean 3.25, cut 9.75
        assert_eq!(w, vec![1.0, 1.0, 1.0, 0.0]);
    }
}
