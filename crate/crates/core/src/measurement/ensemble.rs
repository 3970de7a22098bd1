use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::operator::{CodedDiffraction, DenseMatrix, LinearOperator};
use crate::rng;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    GaussianReal,
    GaussianComplex,
    CodedDiffraction,
}

impl EnsembleKind {
    pub fn is_complex(self) -> bool {
        !matches!(self, EnsembleKind::GaussianReal)
    }

    pub fn name(self) -> &'static str {
        match self {
            EnsembleKind::GaussianReal => "gaussian_real",
            EnsembleKind::GaussianComplex => "gaussian_complex",
            EnsembleKind::CodedDiffraction => "coded_diffraction",
        }
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "gaussian_real" | "real" | "gaussian" => Ok(EnsembleKind::GaussianReal),
            "gaussian_complex" | "complex" => Ok(EnsembleKind::GaussianComplex),
            "coded_diffraction" | "cdp" => Ok(EnsembleKind::CodedDiffraction),
            other => Err(invalid("ensemble", format!("unknown ensemble kind `{other}`"))),
        }
    }
}

/// The sensing operator as stored for each ensemble kind.
#[derive(Clone, Debug)]
pub enum EnsembleOperator {
    Real(DenseMatrix<f64>),
    Complex(DenseMatrix<Complex64>),
    Coded(CodedDiffraction),
}

#[derive(Clone, Debug)]
pub struct SensingEnsemble {
    kind: EnsembleKind,
    rows: usize,
    cols: usize,
    seed: u64,
    op: EnsembleOperator,
}

impl SensingEnsemble {
    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn operator(&self) -> &EnsembleOperator {
        &self.op
    }

    /// The dense real sensing matrix, for `GaussianReal` ensembles.
    pub fn real(&self) -> Option<&DenseMatrix<f64>> {
        match &self.op {
            EnsembleOperator::Real(a) => Some(a),
            _ => None,
        }
    }

    /// The complex operator, for `GaussianComplex` and `CodedDiffraction`.
    pub fn complex(&self) -> Option<&dyn LinearOperator<Complex64>> {
        match &self.op {
            EnsembleOperator::Complex(a) => Some(a),
            EnsembleOperator::Coded(c) => Some(c),
            EnsembleOperator::Real(_) => None,
        }
    }

    /// Wraps an explicit real matrix (used for hand-built instances).
    pub fn from_real_matrix(a: DenseMatrix<f64>) -> Self {
        Self {
            kind: EnsembleKind::GaussianReal,
            rows: a.rows(),
            cols: a.cols(),
            seed: 0,
            op: EnsembleOperator::Real(a),
        }
    }

    pub fn from_complex_matrix(a: DenseMatrix<Complex64>) -> Self {
        Self {
            kind: EnsembleKind::GaussianComplex,
            rows: a.rows(),
            cols: a.cols(),
            seed: 0,
            op: EnsembleOperator::Complex(a),
        }
    }
}

/// Number of measurements for a Gaussian ensemble: `round(alpha * n)`.
pub fn gaussian_rows(n: usize, alpha: f64) -> usize {
    (alpha * n as f64).round() as usize
}

/// Number of `±1` patterns for a coded-diffraction ensemble, or an error
/// when `alpha` is not a positive integer.
pub fn coded_patterns(alpha: f64) -> Result<usize> {
    if !(alpha.is_finite() && alpha >= 1.0 && alpha.fract() == 0.0) {
        return Err(invalid(
            "alpha",
            format!(
                "coded diffraction needs a positive integer number of patterns L = alpha, got {alpha}"
            ),
        ));
    }
    Ok(alpha as usize)
}

fn gaussian_matrix<T: Scalar, R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DenseMatrix<T> {
    let data = (0..rows * cols).map(|_| T::sample_normal(rng)).collect();
    DenseMatrix::from_row_major(rows, cols, data)
}

/// Draws a sensing ensemble. Identical `(kind, n, alpha, seed)` always
/// produce bit-identical operators.
pub fn make_ensemble(kind: EnsembleKind, n: usize, alpha: f64, seed: u64) -> Result<SensingEnsemble> {
    if n == 0 {
        return Err(invalid("n", "signal dimension must be at least 1"));
    }
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(invalid("alpha", format!("oversampling ratio must be positive, got {alpha}")));
    }
    let mut rng = rng::stream(seed);
    let (rows, op) = match kind {
        EnsembleKind::GaussianReal | EnsembleKind::GaussianComplex => {
            let m = gaussian_rows(n, alpha);
            if m == 0 {
                return Err(invalid("alpha", format!("round(alpha * n) = 0 for alpha = {alpha}, n = {n}")));
            }
            let op = if kind == EnsembleKind::GaussianReal {
                EnsembleOperator::Real(gaussian_matrix(m, n, &mut rng))
            } else {
                EnsembleOperator::Complex(gaussian_matrix(m, n, &mut rng))
            };
            (m, op)
        }
        EnsembleKind::CodedDiffraction => {
            let l = coded_patterns(alpha)?;
            let masks = (0..l)
                .map(|_| {
                    (0..n)
                        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                        .collect()
                })
                .collect();
            (l * n, EnsembleOperator::Coded(CodedDiffraction::new(n, masks)))
        }
    };
    Ok(SensingEnsemble {
        kind,
        rows,
        cols: n,
        seed,
        op,
    })
}
