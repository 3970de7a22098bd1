//! Crossover from an approximate PDHG point to an optimal vertex for real
//! data, where the magnitude constraints `-y_i <= <a_i, x> <= y_i` are
//! linear.
//!
//! A push phase moves the feasible point along the projected objective until
//! `n` linearly independent constraints are tight; primal simplex pivots then
//! release constraints with negative multipliers until the vertex is optimal.

use nalgebra::{DMatrix, DVector};

use crate::operator::LinearOperator;
use crate::scalar::{self, Scalar};

use super::gap::feasible_scaling;
use super::polish::Polished;

const TIGHT_TOL: f64 = 1e-10;
const VERTEX_FEAS_TOL: f64 = 1e-12;
const INDEPENDENCE_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 100;
/// Consecutive degenerate pivots after which Bland's rule takes over.
const BLAND_AFTER: usize = 50;

fn apply_real<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, x: &[f64], out: &mut Vec<f64>) {
    let xt: Vec<T> = x.iter().map(|&v| T::from_real(v)).collect();
    let mut z = vec![T::zero(); op.rows()];
    op.apply(&xt, &mut z);
    out.clear();
    out.extend(z.into_iter().map(Scalar::re));
}

fn real_row<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, i: usize) -> Vec<f64> {
    op.row(i).into_iter().map(Scalar::re).collect()
}

/// Largest step `t >= 0` keeping every non-basic constraint satisfied along
/// `z + t w`; returns `(t, row, sign)` of the blocking constraint.
fn ratio_test(z: &[f64], w: &[f64], y: &[f64], in_basis: &[bool]) -> Option<(f64, usize, f64)> {
    let mut best: Option<(f64, usize, f64)> = None;
    for j in 0..z.len() {
        if in_basis[j] || w[j] == 0.0 {
            continue;
        }
        let (t, s) = if w[j] > 0.0 {
            ((y[j] - z[j]) / w[j], 1.0)
        } else {
            ((-y[j] - z[j]) / w[j], -1.0)
        };
        let t = t.max(0.0);
        // ties resolve to the smallest index, which is Bland's rule
        if best.is_none_or(|(bt, _, _)| t < bt) {
            best = Some((t, j, s));
        }
    }
    best
}

fn factor<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, basis: &[(usize, f64)]) -> Option<DMatrix<f64>> {
    let n = op.cols();
    let mut ab = DMatrix::<f64>::zeros(n, n);
    for (r, &(i, _)) in basis.iter().enumerate() {
        for (k, v) in real_row(op, i).into_iter().enumerate() {
            ab[(r, k)] = v;
        }
    }
    ab.try_inverse()
}

struct Vertex {
    x: Vec<f64>,
    z: Vec<f64>,
    basis: Vec<(usize, f64)>,
    binv: DMatrix<f64>,
}

/// Vertex spanned by the `n` largest dual multipliers, if it is feasible.
fn support_vertex<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, y: &[f64], u_hint: &[T]) -> Option<Vertex> {
    let n = op.cols();
    let mut support: Vec<usize> = (0..op.rows()).filter(|&i| u_hint[i] != T::zero()).collect();
    if support.len() < n {
        return None;
    }
    support.sort_by(|&a, &b| u_hint[b].abs().total_cmp(&u_hint[a].abs()).then(a.cmp(&b)));
    let basis: Vec<(usize, f64)> = support[..n].iter().map(|&i| (i, u_hint[i].re().signum())).collect();
    let binv = factor(op, &basis)?;
    let rhs = DVector::from_iterator(n, basis.iter().map(|&(i, s)| s * y[i]));
    let x: Vec<f64> = (&binv * rhs).iter().cloned().collect();
    let mut z = Vec::with_capacity(op.rows());
    apply_real(op, &x, &mut z);
    let violation = z.iter().zip(y).fold(0.0, |acc: f64, (zi, &yi)| acc.max(zi.abs() - yi));
    (violation <= VERTEX_FEAS_TOL).then_some(Vertex { x, z, basis, binv })
}

/// Moves the feasibility-scaled `x0` along the projected objective until
/// `n` independent constraints are tight.
fn push_vertex<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &[f64],
    c: &[f64],
    x0: &[T],
    u_hint: &[T],
) -> Option<Vertex> {
    let n = op.cols();
    let m = op.rows();
    let c_norm = scalar::norm(c);
    let mut x: Vec<f64> = x0.iter().map(|v| v.re()).collect();
    let mut z = Vec::with_capacity(m);
    apply_real(op, &x, &mut z);
    let t = feasible_scaling(&z, y);
    x.iter_mut().for_each(|v| *v *= t);
    z.iter_mut().for_each(|v| *v *= t);

    // greedy independent subset of the tight constraints, large multipliers first
    let mut tight: Vec<usize> = (0..m).filter(|&i| y[i] - z[i].abs() <= TIGHT_TOL).collect();
    tight.sort_by(|&a, &b| u_hint[b].abs().total_cmp(&u_hint[a].abs()).then(a.cmp(&b)));
    let mut basis: Vec<(usize, f64)> = Vec::with_capacity(n);
    let mut in_basis = vec![false; m];
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    let try_add = |row: Vec<f64>, q: &mut Vec<Vec<f64>>| -> bool {
        let norm0 = scalar::norm(&row);
        let mut v = row;
        for _ in 0..2 {
            for qk in q.iter() {
                let p = scalar::dot(qk, &v);
                scalar::axpy(-p, qk, &mut v);
            }
        }
        let nv = scalar::norm(&v);
        if nv <= INDEPENDENCE_TOL * norm0.max(f64::MIN_POSITIVE) {
            return false;
        }
        v.iter_mut().for_each(|e| *e /= nv);
        q.push(v);
        true
    };
    for i in tight {
        if basis.len() == n {
            break;
        }
        if try_add(real_row(op, i), &mut q) {
            basis.push((i, z[i].signum()));
            in_basis[i] = true;
        }
    }

    let mut w = Vec::with_capacity(m);
    while basis.len() < n {
        let mut d = c.to_vec();
        for qk in &q {
            let p = scalar::dot(qk, &d);
            scalar::axpy(-p, qk, &mut d);
        }
        if scalar::norm(&d) <= 1e-12 * c_norm {
            // objective is flat on the face: any null-space direction
            d = (0..n)
                .map(|j| {
                    let mut e = vec![0.0; n];
                    e[j] = 1.0;
                    for qk in &q {
                        let p = qk[j];
                        scalar::axpy(-p, qk, &mut e);
                    }
                    e
                })
                .max_by(|a, b| scalar::norm(a).total_cmp(&scalar::norm(b)))?;
        }
        apply_real(op, &d, &mut w);
        let (t, j, s) = ratio_test(&z, &w, y, &in_basis)?;
        scalar::axpy(t, &d, &mut x);
        scalar::axpy(t, &w, &mut z);
        if !try_add(real_row(op, j), &mut q) {
            return None;
        }
        basis.push((j, s));
        in_basis[j] = true;
    }
    let binv = factor(op, &basis)?;
    Some(Vertex { x, z, basis, binv })
}

pub(crate) fn crossover<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &[f64],
    c: &[T],
    x0: &[T],
    u_hint: &[T],
    max_pivots: usize,
) -> Option<Polished<T>> {
    if T::IS_COMPLEX {
        return None;
    }
    let n = op.cols();
    let m = op.rows();
    let c: Vec<f64> = c.iter().map(|v| v.re()).collect();
    let Vertex { mut x, mut z, mut basis, mut binv } =
        support_vertex(op, y, u_hint).or_else(|| push_vertex(op, y, &c, x0, u_hint))?;
    let mut in_basis = vec![false; m];
    basis.iter().for_each(|&(i, _)| in_basis[i] = true);
    let mut w = Vec::with_capacity(m);
    let cv = DVector::from_vec(c.clone());
    let mut degenerate_run = 0;
    let mut u_b;
    let refactor_every = REFACTOR_EVERY.max(n / 2);
    let mut pivots = 0;
    loop {
        if pivots > 0 && pivots % refactor_every == 0 {
            binv = factor(op, &basis)?;
            let rhs = DVector::from_iterator(n, basis.iter().map(|&(i, s)| s * y[i]));
            x = (&binv * rhs).iter().cloned().collect();
            apply_real(op, &x, &mut z);
        }
        u_b = binv.tr_mul(&cv);
        let u_max = u_b.amax();
        let tol = 1e-12 * u_max.max(f64::MIN_POSITIVE);
        let leaving = if degenerate_run >= BLAND_AFTER {
            (0..n)
                .filter(|&r| basis[r].1 * u_b[r] < -tol)
                .min_by_key(|&r| basis[r].0)
        } else {
            (0..n)
                .filter(|&r| basis[r].1 * u_b[r] < -tol)
                .min_by(|&a, &b| (basis[a].1 * u_b[a]).total_cmp(&(basis[b].1 * u_b[b])))
        };
        let Some(r) = leaving else { break };
        if pivots == max_pivots {
            return None;
        }
        pivots += 1;
        let (i_out, s_out) = basis[r];
        let d: Vec<f64> = binv.column(r).iter().map(|v| -s_out * v).collect();
        apply_real(op, &d, &mut w);
        // the released constraint may travel to its opposite bound
        in_basis[i_out] = false;
        let (t, j, s) = ratio_test(&z, &w, y, &in_basis)?;
        scalar::axpy(t, &d, &mut x);
        scalar::axpy(t, &w, &mut z);
        degenerate_run = if t <= 1e-14 { degenerate_run + 1 } else { 0 };
        in_basis[j] = true;
        if j == i_out {
            basis[r] = (j, s);
            continue;
        }
        // Sherman-Morrison update for replacing row r of A_B by a_j
        let delta = DVector::from_vec(
            real_row(op, j)
                .into_iter()
                .zip(real_row(op, i_out))
                .map(|(a, b)| a - b)
                .collect(),
        );
        let col = binv.column(r).clone_owned();
        let row = binv.tr_mul(&delta);
        let denom = 1.0 + row[r];
        if denom.abs() < 1e-14 {
            return None;
        }
        binv.ger(-1.0 / denom, &col, &row, 1.0);
        basis[r] = (j, s);
    }

    let mut u = vec![T::zero(); m];
    for (r, &(i, _)) in basis.iter().enumerate() {
        u[i] = T::from_real(u_b[r]);
    }
    Some(Polished {
        x: x.into_iter().map(T::from_real).collect(),
        u,
    })
}
