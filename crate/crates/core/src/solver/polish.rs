//! Active-set polishing for the linear program.
//!
//! Near convergence the support of the dual iterate identifies the active
//! constraints and their phases: `u_i != 0` forces `<a_i, x> = y_i u_i/|u_i|`.
//! Solving that equality system exactly (least squares when overdetermined,
//! least-norm change when underdetermined) and moving `u` minimally onto
//! `A_S^H u_S = c` removes the slow tail of the first-order iteration. The
//! result is only accepted after independent certification.

use nalgebra::{DMatrix, DVector};

use crate::operator::LinearOperator;
use crate::scalar::Scalar;

/// Polished primal-dual pair in the units of the inputs.
pub(crate) struct Polished<T> {
    pub x: Vec<T>,
    pub u: Vec<T>,
}

/// Solves `G w = rhs` for Hermitian positive definite `G` with one step of
/// iterative refinement.
fn hpd_solve<N: nalgebra::ComplexField<RealField = f64> + Copy>(
    g: &DMatrix<N>,
    rhs: &DVector<N>,
) -> Option<DVector<N>> {
    let chol = g.clone().cholesky()?;
    let mut w = chol.solve(rhs);
    let r = rhs - g * &w;
    w += chol.solve(&r);
    Some(w)
}

/// Exact solve on a fixed active set `(index, phase)`.
fn solve_active<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &[f64],
    c: &[T],
    x: &[T],
    u: &[T],
    active: &[(usize, T)],
) -> Option<Polished<T>> {
    let n = op.cols();
    let k = active.len();
    let mut a_s = DMatrix::<T::Na>::zeros(k, n);
    for (r, &(i, _)) in active.iter().enumerate() {
        for (j, v) in op.row(i).into_iter().enumerate() {
            a_s[(r, j)] = v.to_na();
        }
    }
    let b = DVector::from_iterator(k, active.iter().map(|&(i, ph)| ph.scale(y[i]).to_na()));
    let xv = DVector::from_iterator(n, x.iter().map(|v| v.to_na()));
    let cv = DVector::from_iterator(n, c.iter().map(|v| v.to_na()));
    let us = DVector::from_iterator(k, active.iter().map(|&(i, _)| u[i].to_na()));
    let a_h = a_s.adjoint();

    let (x_new, u_s) = if k >= n {
        let g = &a_h * &a_s;
        let r = &b - &a_s * &xv;
        let x_new = &xv + hpd_solve(&g, &(&a_h * r))?;
        let u_s = &us + &a_s * hpd_solve(&g, &(&cv - &a_h * &us))?;
        (x_new, u_s)
    } else {
        let g = &a_s * &a_h;
        let r = &b - &a_s * &xv;
        let x_new = &xv + &a_h * hpd_solve(&g, &r)?;
        let u_s = hpd_solve(&g, &(&a_s * &cv))?;
        (x_new, u_s)
    };
    if x_new.iter().chain(u_s.iter()).any(|v| !nalgebra::ComplexField::is_finite(v)) {
        return None;
    }
    let mut u_out = vec![T::zero(); op.rows()];
    for (r, &(i, _)) in active.iter().enumerate() {
        u_out[i] = T::from_na(u_s[r]);
    }
    Some(Polished {
        x: x_new.iter().map(|&v| T::from_na(v)).collect(),
        u: u_out,
    })
}

/// Maximum number of active-set corrections for real programs.
const MAX_ROUNDS: usize = 8;

/// Polishes `(x, u)` starting from the support of `u`. For real data the
/// active set is corrected for a few rounds: constraints whose multiplier
/// has the wrong sign are released and violated constraints are added.
pub(crate) fn polish<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &[f64],
    c: &[T],
    x: &[T],
    u: &[T],
) -> Option<Polished<T>> {
    let m = op.rows();
    let mut active: Vec<(usize, T)> =
        (0..m).filter(|&i| u[i] != T::zero()).map(|i| (i, u[i].phase())).collect();
    if active.is_empty() {
        return None;
    }
    let rounds = if T::IS_COMPLEX { 1 } else { MAX_ROUNDS };
    let mut z = vec![T::zero(); m];
    let mut last = None;
    for _ in 0..rounds {
        let p = solve_active(op, y, c, x, u, &active)?;
        op.apply(&p.x, &mut z);
        let u_max = p.u.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()));
        let before = active.len();
        active.retain(|&(i, ph)| (ph.conj() * p.u[i]).re() >= -1e-12 * u_max);
        let released = active.len() < before;
        let mut added = false;
        for i in 0..m {
            if z[i].abs() > y[i] && p.u[i] == T::zero() {
                active.push((i, z[i].phase()));
                added = true;
            }
        }
        last = Some(p);
        if !(released || added) {
            break;
        }
        active.sort_by_key(|&(i, _)| i);
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::DenseMatrix;

    #[test]
    fn active_set_from_dual_support_gives_exact_corner() {
        let a = DenseMatrix::<f64>::identity(2);
        let p = polish(&a, &[1.0, 2.0], &[3.0, -1.0], &[0.98, -1.97], &[2.9, -1.1]).unwrap();
        assert_eq!(p.x, vec![1.0, -2.0]);
        assert!((p.u[0] - 3.0).abs() < 1e-12 && (p.u[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_support_gives_nothing() {
        let a = DenseMatrix::<f64>::identity(2);
        assert!(polish(&a, &[1.0, 1.0], &[1.0, 0.0], &[0.0, 0.0], &[0.0, 0.0]).is_none());
    }
}
