use nalgebra::DMatrix;

use crate::error::{invalid, Error, Result};
use crate::measurement::{Measurements, Preprocessing};
use crate::operator::LinearOperator;
use crate::scalar::Scalar;
use crate::solver::{NsdOperator, Objective};

use super::lamp::phaselamp_with;
use super::{LampOptions, RecoveryResult};

/// Eigenvalues with `|lambda| <= EIGEN_CUTOFF * ||D||` join neither part.
pub const EIGEN_CUTOFF: f64 = 1e-12;

/// `D = (1/m) A^H diag(w) A` as a dense Hermitian matrix.
pub fn weighted_matrix<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, weights: &[f64]) -> Result<DMatrix<T::Na>> {
    let (m, n) = (op.rows(), op.cols());
    if weights.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: weights.len() });
    }
    let mut a = DMatrix::<T::Na>::zeros(m, n);
    let mut wa = DMatrix::<T::Na>::zeros(m, n);
    for i in 0..m {
        for (j, v) in op.row(i).into_iter().enumerate() {
            a[(i, j)] = v.to_na();
            wa[(i, j)] = v.scale(weights[i]).to_na();
        }
    }
    let mut d = a.ad_mul(&wa);
    let inv_m = 1.0 / m as f64;
    d.iter_mut().for_each(|v| *v = T::from_na(*v).scale(inv_m).to_na());
    // exact Hermitian symmetry before the eigensolver
    let dh = d.adjoint();
    d += dh;
    d.iter_mut().for_each(|v| *v = T::from_na(*v).scale(0.5).to_na());
    Ok(d)
}

/// Eigenvalue split `D = D1 - D2` with both parts negative semidefinite.
#[derive(Clone, Debug)]
pub struct WeightedSplit<T> {
    /// Negative eigenvalues of `D`.
    pub d1: NsdOperator<T>,
    /// Negated positive eigenvalues of `D`.
    pub d2: NsdOperator<T>,
    pub eigenvalues: Vec<f64>,
}

pub fn split_weighted_matrix<T: Scalar>(d: &DMatrix<T::Na>) -> Result<WeightedSplit<T>> {
    let n = d.nrows();
    if d.ncols() != n {
        return Err(Error::Eigen(format!("matrix is {}x{}, not square", n, d.ncols())));
    }
    let asym = (d - d.adjoint()).iter().fold(0.0, |acc: f64, v| acc.max(T::from_na(*v).abs()));
    let scale = d.iter().fold(0.0, |acc: f64, v| acc.max(T::from_na(*v).abs()));
    if !(asym <= 1e-10 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::Eigen(format!("matrix is not Hermitian (asymmetry {asym:.3e})")));
    }
    let eig = d.clone().symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    let norm = values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()));
    let cut = EIGEN_CUTOFF * norm;
    let (mut v1, mut l1, mut v2, mut l2) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (k, &lambda) in values.iter().enumerate() {
        let v: Vec<T> = eig.eigenvectors.column(k).iter().map(|&e| T::from_na(e)).collect();
        if lambda < -cut {
            v1.push(v);
            l1.push(lambda);
        } else if lambda > cut {
            v2.push(v);
            l2.push(-lambda);
        }
    }
    Ok(WeightedSplit {
        d1: NsdOperator::from_eigenpairs(n, v1, l1),
        d2: NsdOperator::from_eigenpairs(n, v2, l2),
        eigenvalues: values,
    })
}

/// Weighted PhaseLamp: convex-concave iterations on `max x^H D x` over the
/// polytope, with `D = (1/m) sum_i omega(y_i) a_i a_i^H = D1 - D2`. Step `k`
/// maximizes `x^H D1 x - 2 Re(x_k^H D2 x)`, which is linear with direction
/// `-2 D2 x_k` when `D1 = 0` (nonnegative weights).
pub fn wphaselamp<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &Measurements,
    x_init: &[T],
    omega: &Preprocessing,
    opts: &LampOptions<T>,
) -> Result<RecoveryResult<T>> {
    if y.len() != op.rows() {
        return Err(Error::DimensionMismatch { expected: op.rows(), got: y.len() });
    }
    let weights = omega.weights(y.as_slice());
    if weights.len() != y.len() || weights.iter().any(|w| !w.is_finite()) {
        return Err(invalid("omega", "weights must be finite, one per measurement"));
    }
    let split = split_weighted_matrix::<T>(&weighted_matrix(op, &weights)?)?;
    let n = op.cols();
    let linear = split.d1.is_zero();
    let mut d2x = vec![T::zero(); n];
    phaselamp_with(op, y, x_init, opts, move |x| {
        split.d2.apply(x, &mut d2x);
        let b: Vec<T> = d2x.iter().map(|v| v.scale(-2.0)).collect();
        if linear {
            Objective::Linear(b)
        } else {
            Objective::ConcaveQuadratic { q: split.d1.clone(), b }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::DenseMatrix;
    use crate::scalar;
    use num_complex::Complex64;

    /// `x^H D x` for a dense Hermitian `D`.
    fn hermitian_form<T: Scalar>(d: &DMatrix<T::Na>, x: &[T]) -> f64 {
        let n = x.len();
        let dx: Vec<T> = (0..n)
            .map(|i| (0..n).fold(T::zero(), |acc, j| acc + T::from_na(d[(i, j)]) * x[j]))
            .collect();
        scalar::dot(x, &dx).re()
    }

    #[test]
    fn identity_matrix_gives_diagonal_weights() {
        let a = DenseMatrix::<f64>::identity(3);
        let d = weighted_matrix(&a, &[3.0, 6.0, 9.0]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { (3 * (i + 1)) as f64 / 3.0 } else { 0.0 };
                assert!((d[(i, j)] - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn split_reconstructs_matrix() {
        let rows = vec![vec![1.0, 2.0, 0.5], vec![-1.0, 0.3, 2.0], vec![0.2, -0.7, 1.0], vec![1.5, 0.1, -0.4]];
        let a = DenseMatrix::from_rows(&rows);
        let w = [1.0, -2.0, 0.5, -0.3];
        let d = weighted_matrix(&a, &w).unwrap();
        let s = split_weighted_matrix::<f64>(&d).unwrap();
        assert!(s.d1.rank() > 0 && s.d2.rank() > 0);
        let x = [0.3, -1.2, 0.8];
        let direct = hermitian_form::<f64>(&d, &x);
        let split = s.d1.quadratic_form(&x) - s.d2.quadratic_form(&x);
        assert!((direct - split).abs() < 1e-12);
    }

    #[test]
    fn complex_split_is_hermitian_consistent() {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let rows = vec![vec![c(1.0, 0.5), c(0.0, -1.0)], vec![c(-0.3, 0.2), c(1.0, 1.0)], vec![c(0.7, 0.0), c(0.1, -0.4)]];
        let a = DenseMatrix::from_rows(&rows);
        let d = weighted_matrix(&a, &[1.0, 2.0, 0.5]).unwrap();
        let s = split_weighted_matrix::<Complex64>(&d).unwrap();
        assert!(s.d1.is_zero());
        let x = [c(0.3, -0.1), c(-0.5, 0.9)];
        assert!((hermitian_form::<Complex64>(&d, &x) + s.d2.quadratic_form(&x)).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(split_weighted_matrix::<f64>(&d), Err(Error::Eigen(_))));
    }

    #[test]
    fn decoupled_coordinates_converge_to_first_axis() {
        // A = I, xi = e1: D is diagonal with a single positive entry
        let a = DenseMatrix::<f64>::identity(3);
        let y = Measurements::new(vec![1.0, 0.0, 0.0]).unwrap();
        let r = wphaselamp(&a, &y, &[0.4, 0.3, -0.2], &Preprocessing::Square, &LampOptions::default()).unwrap();
        assert!((r.x_hat[0].abs() - 1.0).abs() < 1e-7);
        assert!(r.x_hat[1].abs() < 1e-7 && r.x_hat[2].abs() < 1e-7);
    }
}
