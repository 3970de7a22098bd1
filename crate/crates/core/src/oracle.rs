//! Exact reference solutions of tiny real linear programs by enumerating the
//! vertices of `{x : -y_i <= <a_i, x> <= y_i}`.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::operator::{DenseMatrix, LinearOperator};

/// Largest dimension accepted by [`vertex_oracle`].
pub const MAX_ORACLE_DIM: usize = 4;
/// Relative slack when testing candidate vertices for feasibility.
const FEAS_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution {
    pub x: Vec<f64>,
    pub value: f64,
    pub vertices: usize,
}

fn subsets(m: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..m {
        if m - i < k - cur.len() {
            break;
        }
        cur.push(i);
        subsets(m, k, i + 1, cur, out);
        cur.pop();
    }
}

/// Maximizes `<c, x>` over the magnitude polytope by checking every basic
/// solution. Returns `None` when `A` does not have full column rank, where
/// the polytope is unbounded.
pub fn vertex_oracle(a: &DenseMatrix<f64>, y: &[f64], c: &[f64]) -> Result<Option<OracleSolution>> {
    let (m, n) = (a.rows(), a.cols());
    if n == 0 || n > MAX_ORACLE_DIM {
        return Err(invalid("n", format!("vertex enumeration supports 1..={MAX_ORACLE_DIM} columns, got {n}")));
    }
    if y.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: y.len() });
    }
    if c.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: c.len() });
    }
    let full = DMatrix::from_row_slice(m, n, a.as_slice());
    if m < n || full.clone().svd(false, false).rank(1e-10 * full.norm().max(1.0)) < n {
        return Ok(None);
    }
    let y_scale = y.iter().cloned().fold(1.0, f64::max);
    let mut sets = Vec::new();
    subsets(m, n, 0, &mut Vec::new(), &mut sets);
    let mut best: Option<OracleSolution> = None;
    let mut vertices = 0;
    for rows in sets {
        let sub = DMatrix::from_fn(n, n, |r, k| full[(rows[r], k)]);
        let lu = sub.lu();
        if !lu.is_invertible() {
            continue;
        }
        // every sign pattern of the chosen rows
        for signs in 0..(1usize << n) {
            let rhs = DVector::from_fn(n, |r, _| if signs >> r & 1 == 1 { -y[rows[r]] } else { y[rows[r]] });
            let Some(x) = lu.solve(&rhs) else { continue };
            let z = &full * &x;
            if z.iter().zip(y).any(|(zi, yi)| zi.abs() > yi + FEAS_SLACK * y_scale) {
                continue;
            }
            vertices += 1;
            let value: f64 = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(OracleSolution { x: x.iter().cloned().collect(), value, vertices: 0 });
            }
        }
    }
    Ok(best.map(|b| OracleSolution { vertices, ..b }))
}
