use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::measurement::{make_ensemble, measure_real, EnsembleKind};
use crate::operator::LinearOperator;
use crate::rng::{derive_seed, substream, tag};
use crate::scalar::{self, Scalar};
use crate::theory::c_d;

const DIRECTIONS: u64 = 0x6469_7273;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometrySample {
    pub s: f64,
    pub r: f64,
    /// `alpha c_d(s, r) - r^2`; the point violates the limit set when this
    /// exceeds `eps`.
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    pub eps: f64,
    pub seed: u64,
    pub violations: usize,
    pub violation_fraction: f64,
    pub max_excess: f64,
    pub samples: Vec<GeometrySample>,
}

/// Maps boundary points of a real Gaussian magnitude polytope with target
/// `xi = e_1` to `(s, r) = (x_1, ||x_{2..n}||)` and counts how many leave
/// `{alpha c_d(s, r) <= r^2 + eps}`.
///
/// Directions make a uniformly distributed angle with `xi` and point
/// uniformly in the orthogonal complement; each is scaled exactly to where
/// the ray leaves the polytope.
pub fn check_feasibility_geometry(n: usize, alpha: f64, samples: usize, eps: f64, seed: u64) -> Result<GeometryReport> {
    if n < 2 {
        return Err(invalid("n", format!("need n >= 2 for an orthogonal component, got {n}")));
    }
    if samples == 0 {
        return Err(invalid("samples", "need at least one sample"));
    }
    if !(eps > 0.0) {
        return Err(invalid("eps", format!("tolerance must be positive, got {eps}")));
    }
    let ensemble = make_ensemble(EnsembleKind::GaussianReal, n, alpha, derive_seed(seed, &[tag::ENSEMBLE]))?;
    let a = ensemble.real().expect("real Gaussian ensemble");
    let mut xi = vec![0.0; n];
    xi[0] = 1.0;
    let y = measure_real(&ensemble, &xi)?;
    let mut gen = substream(seed, DIRECTIONS);
    let mut z = vec![0.0; a.rows()];
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let theta = gen.random::<f64>() * PI;
        let mut w: Vec<f64> = (0..n - 1).map(|_| f64::sample_normal(&mut gen)).collect();
        let nw = scalar::norm(&w);
        w.iter_mut().for_each(|v| *v *= theta.sin() / nw);
        let mut d = Vec::with_capacity(n);
        d.push(theta.cos());
        d.extend(w);
        a.apply(&d, &mut z);
        // distance along the ray to the first active constraint
        let t = z
            .iter()
            .zip(y.as_slice())
            .filter(|(zi, _)| zi.abs() > 0.0)
            .map(|(zi, yi)| yi / zi.abs())
            .fold(f64::INFINITY, f64::min);
        let (s, r) = (t * d[0], t * theta.sin());
        out.push(GeometrySample { s, r, excess: alpha * c_d(s, r) - r * r });
    }
    let violations = out.iter().filter(|p| !(p.excess <= eps)).count();
    Ok(GeometryReport {
        n,
        m: a.rows(),
        alpha,
        eps,
        seed,
        violations,
        violation_fraction: violations as f64 / samples as f64,
        max_excess: out.iter().map(|p| p.excess).fold(f64::NEG_INFINITY, f64::max),
        samples: out,
    })
}
