//! Optimality certificates for the linear program
//! `max Re <c, x>  s.t. |<a_i, x>| <= y_i`, whose dual is
//! `min sum_i y_i |u_i|  s.t. A^H u = c`.

use crate::error::{Error, Result};
use crate::operator::{self, LinearOperator};
use crate::scalar::{self, Scalar};

use super::{Objective, PolytopeProblem};

const CG_TOL: f64 = 1e-13;
const CG_MAX_ITERS: usize = 500;

/// Largest `t` in `[0, 1]` with `|t z_i| <= y_i` on every row with `y_i > 0`.
/// Rows with `y_i = 0` cannot be repaired by scaling and are left to the
/// reported violation.
pub fn feasible_scaling<T: Scalar>(z: &[T], y: &[f64]) -> f64 {
    z.iter().zip(y).fold(1.0, |t: f64, (zi, &yi)| {
        let mag = zi.abs();
        if yi > 0.0 && mag > yi {
            t.min(yi / mag)
        } else {
            t
        }
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate<T> {
    /// `x` scaled into the polytope.
    pub x_feasible: Vec<T>,
    /// `Re <c, x_feasible>`
    pub primal_value: f64,
    /// `u` moved onto the affine set `A^H u = c`.
    pub dual_feasible: Vec<T>,
    /// `sum_i y_i |u'_i|`, an upper bound on the optimum.
    pub dual_bound: f64,
    /// Relative residual `||A^H u' - c|| / ||c||` left by the correction.
    pub dual_residual: f64,
}

impl<T> Certificate<T> {
    pub fn gap(&self) -> f64 {
        (self.dual_bound - self.primal_value).max(0.0)
    }
}

/// Builds a primal-dual certificate from an arbitrary pair `(x, u)`.
///
/// The dual point is corrected by the least-norm change that restores
/// `A^H u = c`, namely `u' = u - A (A^H A)^{-1} (A^H u - c)`; the primal
/// point is shrunk radially until it is feasible.
pub fn certify_linear<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &[f64],
    c: &[T],
    x: &[T],
    u: &[T],
) -> Certificate<T> {
    let m = op.rows();
    let n = op.cols();
    let mut z = vec![T::zero(); m];
    op.apply(x, &mut z);
    let t = feasible_scaling(&z, y);
    let x_feasible = scalar::scaled(x, t);
    let primal_value = scalar::dot(c, &x_feasible).re();

    let mut r = vec![T::zero(); n];
    op.adjoint(u, &mut r);
    r.iter_mut().zip(c).for_each(|(ri, &ci)| *ri -= ci);
    let (v, _) = operator::normal_equations_cg(op, &r, CG_TOL, CG_MAX_ITERS);
    let mut av = vec![T::zero(); m];
    op.apply(&v, &mut av);
    let dual_feasible: Vec<T> = u.iter().zip(&av).map(|(&ui, &ai)| ui - ai).collect();
    let dual_bound = dual_feasible.iter().zip(y).map(|(ui, &yi)| yi * ui.abs()).sum();

    op.adjoint(&dual_feasible, &mut r);
    let c_norm = scalar::norm(c).max(f64::MIN_POSITIVE);
    let dual_residual = scalar::dist(&r, c) / c_norm;

    Certificate {
        x_feasible,
        primal_value,
        dual_feasible,
        dual_bound,
        dual_residual,
    }
}

/// Nonnegative gap between the dual bound at the corrected `u` and the
/// primal value at the feasibility-projected `x`.
pub fn duality_gap<T: Scalar, O: LinearOperator<T> + ?Sized>(
    problem: &PolytopeProblem<'_, T, O>,
    x: &[T],
    u: &[T],
) -> Result<f64> {
    let Objective::Linear(c) = &problem.objective else {
        return Err(Error::NonLinearObjective);
    };
    if x.len() != problem.op.cols() {
        return Err(Error::DimensionMismatch {
            expected: problem.op.cols(),
            got: x.len(),
        });
    }
    if u.len() != problem.op.rows() {
        return Err(Error::DimensionMismatch {
            expected: problem.op.rows(),
            got: u.len(),
        });
    }
    Ok(certify_linear(problem.op, problem.y.as_slice(), c, x, u).gap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::Measurements;
    use crate::operator::DenseMatrix;

    #[test]
    fn one_dimensional_optimum_has_zero_gap() {
        let a = DenseMatrix::from_rows(&[vec![1.0]]);
        let y = Measurements::new(vec![1.0]).unwrap();
        let p = PolytopeProblem::linear(&a, &y, vec![1.0]);
        assert!(duality_gap(&p, &[1.0], &[1.0]).unwrap() <= 1e-10);
        // x = 0, u = 0: the corrected dual u' = 1 bounds the optimum exactly
        assert!((duality_gap(&p, &[0.0], &[0.0]).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn infeasible_primal_is_scaled_back() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]);
        let z = [4.0, 0.5];
        assert_eq!(feasible_scaling(&z, &[1.0, 1.0]), 0.25);
        let y = Measurements::new(vec![1.0, 1.0]).unwrap();
        let p = PolytopeProblem::linear(&a, &y, vec![1.0, 1.0]);
        // optimum (0.5, 1) with value 1.5; dual u = (0.5, 1)
        assert!(duality_gap(&p, &[0.5, 1.0], &[0.5, 1.0]).unwrap() < 1e-12);
        let g = duality_gap(&p, &[1.0, 1.0], &[0.5, 1.0]).unwrap();
        assert!((g - (1.5 - 1.0)).abs() < 1e-12, "gap {g}");
    }

    #[test]
    fn quadratic_objective_is_rejected() {
        let a = DenseMatrix::<f64>::identity(1);
        let y = Measurements::new(vec![1.0]).unwrap();
        let p = PolytopeProblem::new(
            &a,
            &y,
            Objective::ConcaveQuadratic {
                q: super::super::NsdOperator::zero(1),
                b: vec![1.0],
            },
        );
        assert!(matches!(duality_gap(&p, &[0.0], &[0.0]), Err(Error::NonLinearObjective)));
    }
}
