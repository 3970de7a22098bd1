//! Matrix-free linear operators: dense Gaussian sensing matrices and
//! FFT-based coded diffraction patterns.
//!
//! Convention: the measurement vector is `z = A x`, so the `i`-th row of `A`
//! acts on `x` without conjugation. Adjoints are conjugate transposes.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::scalar::{self, Scalar};

pub trait LinearOperator<T: Scalar>: Send + Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;

    /// `out = A x`
    fn apply(&self, x: &[T], out: &mut [T]);

    /// `out = A^H z`
    fn adjoint(&self, z: &[T], out: &mut [T]);

    /// Computes `ax = A x`, replaces each `ax[i]` by `w_i = map(i, ax[i])`
    /// and writes `out = A^H w`. Dense operators do this in a single sweep
    /// over the matrix.
    fn apply_map_adjoint(
        &self,
        x: &[T],
        ax: &mut [T],
        map: &mut dyn FnMut(usize, T) -> T,
        out: &mut [T],
    ) {
        self.apply(x, ax);
        for (i, v) in ax.iter_mut().enumerate() {
            *v = map(i, *v);
        }
        self.adjoint(ax, out);
    }

    /// Explicit `i`-th row, for verification and small dense constructions.
    fn row(&self, i: usize) -> Vec<T>;
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major buffer has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::from_real(1.0);
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    #[inline]
    pub fn row_slice(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    fn row_times(&self, i: usize, x: &[T]) -> T {
        // plain (unconjugated) row-vector product
        let mut acc = T::zero();
        for (&a, &b) in self.row_slice(i).iter().zip(x) {
            acc += a * b;
        }
        acc
    }
}

impl<T: Scalar> LinearOperator<T> for DenseMatrix<T> {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn apply(&self, x: &[T], out: &mut [T]) {
        debug_assert_eq!(x.len(), self.cols);
        for (i, o) in out.iter_mut().enumerate().take(self.rows) {
            *o = self.row_times(i, x);
        }
    }

    fn adjoint(&self, z: &[T], out: &mut [T]) {
        debug_assert_eq!(z.len(), self.rows);
        out.iter_mut().for_each(|v| *v = T::zero());
        for (i, &zi) in z.iter().enumerate() {
            if zi == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row_slice(i)) {
                *o += a.conj() * zi;
            }
        }
    }

    fn apply_map_adjoint(
        &self,
        x: &[T],
        ax: &mut [T],
        map: &mut dyn FnMut(usize, T) -> T,
        out: &mut [T],
    ) {
        out.iter_mut().for_each(|v| *v = T::zero());
        for i in 0..self.rows {
            let row = self.row_slice(i);
            let mut acc = T::zero();
            for (&a, &b) in row.iter().zip(x) {
                acc += a * b;
            }
            let w = map(i, acc);
            ax[i] = w;
            if w != T::zero() {
                for (o, &a) in out.iter_mut().zip(row) {
                    *o += a.conj() * w;
                }
            }
        }
    }

    fn row(&self, i: usize) -> Vec<T> {
        self.row_slice(i).to_vec()
    }
}

/// Coded diffraction patterns: row `(k, l)` (stored at index `l * n + k`)
/// is the pointwise product of the `k`-th DFT vector
/// `f_k[j] = exp(-2 pi i k j / n)` with the `l`-th `±1` modulation mask.
#[derive(Clone)]
pub struct CodedDiffraction {
    n: usize,
    masks: Vec<Vec<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for CodedDiffraction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CodedDiffraction")
            .field("n", &self.n)
            .field("patterns", &self.masks.len())
            .finish()
    }
}

impl CodedDiffraction {
    pub fn new(n: usize, masks: Vec<Vec<f64>>) -> Self {
        assert!(masks.iter().all(|m| m.len() == n), "mask length must equal n");
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        Self {
            n,
            masks,
            forward,
            inverse,
        }
    }

    pub fn patterns(&self) -> usize {
        self.masks.len()
    }

    pub fn masks(&self) -> &[Vec<f64>] {
        &self.masks
    }
}

impl LinearOperator<Complex64> for CodedDiffraction {
    fn rows(&self) -> usize {
        self.n * self.masks.len()
    }

    fn cols(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let n = self.n;
        for (l, mask) in self.masks.iter().enumerate() {
            let block = &mut out[l * n..(l + 1) * n];
            for ((b, &xi), &s) in block.iter_mut().zip(x).zip(mask) {
                *b = xi * s;
            }
            self.forward.process(block);
        }
    }

    fn adjoint(&self, z: &[Complex64], out: &mut [Complex64]) {
        let n = self.n;
        out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (l, mask) in self.masks.iter().enumerate() {
            buf.copy_from_slice(&z[l * n..(l + 1) * n]);
            self.inverse.process(&mut buf);
            for ((o, &b), &s) in out.iter_mut().zip(&buf).zip(mask) {
                *o += b * s;
            }
        }
    }

    fn row(&self, i: usize) -> Vec<Complex64> {
        let (l, k) = (i / self.n, i % self.n);
        let n = self.n as f64;
        (0..self.n)
            .map(|j| {
                let angle = -2.0 * std::f64::consts::PI * ((k * j) % self.n) as f64 / n;
                Complex64::from_polar(1.0, angle) * self.masks[l][j]
            })
            .collect()
    }
}

/// Power-iteration estimate of the spectral norm `||A||_2`.
pub fn spectral_norm<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, iters: usize) -> f64 {
    let n = op.cols();
    let m = op.rows();
    // deterministic, generic start vector with no special alignment
    let mut v: Vec<T> = (0..n)
        .map(|j| T::from_real(1.0 + ((j * 7919) % 13) as f64 / 13.0))
        .collect();
    let nv = scalar::norm(&v);
    v.iter_mut().for_each(|x| *x = x.scale(1.0 / nv));
    let mut av = vec![T::zero(); m];
    let mut w = vec![T::zero(); n];
    let mut sigma_sq = 0.0;
    for _ in 0..iters.max(1) {
        op.apply(&v, &mut av);
        op.adjoint(&av, &mut w);
        let nw = scalar::norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        let next = scalar::norm_sqr(&av);
        let done = (next - sigma_sq).abs() <= 1e-10 * next;
        sigma_sq = next;
        v.iter_mut()
            .zip(&w)
            .for_each(|(vi, &wi)| *vi = wi.scale(1.0 / nw));
        if done {
            break;
        }
    }
    sigma_sq.sqrt()
}

/// Solves `(A^H A) v = b` by conjugate gradients. Returns the solution and
/// the final relative residual.
pub fn normal_equations_cg<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    b: &[T],
    rel_tol: f64,
    max_iters: usize,
) -> (Vec<T>, f64) {
    let n = op.cols();
    let m = op.rows();
    let bnorm = scalar::norm(b);
    let mut v = vec![T::zero(); n];
    if bnorm == 0.0 {
        return (v, 0.0);
    }
    let mut r = b.to_vec();
    let mut p = r.clone();
    let mut rr = scalar::norm_sqr(&r);
    let mut ap = vec![T::zero(); m];
    let mut q = vec![T::zero(); n];
    for _ in 0..max_iters {
        if rr.sqrt() <= rel_tol * bnorm {
            break;
        }
        op.apply(&p, &mut ap);
        op.adjoint(&ap, &mut q);
        let pq = scalar::dot(&p, &q).re();
        if pq <= 0.0 {
            break;
        }
        let step = rr / pq;
        scalar::axpy(T::from_real(step), &p, &mut v);
        scalar::axpy(T::from_real(-step), &q, &mut r);
        let rr_next = scalar::norm_sqr(&r);
        let beta = rr_next / rr;
        rr = rr_next;
        for (pi, &ri) in p.iter_mut().zip(&r) {
            *pi = ri + pi.scale(beta);
        }
    }
    (v, rr.sqrt() / bnorm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cdp() -> CodedDiffraction {
        let masks = vec![
            vec![1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0, -1.0],
            vec![-1.0, -1.0, 1.0, -1.0, 1.0, 1.0, 1.0, -1.0],
        ];
        CodedDiffraction::new(8, masks)
    }

    #[test]
    fn cdp_apply_matches_explicit_rows() {
        let op = small_cdp();
        let x: Vec<Complex64> = (0..8)
            .map(|j| Complex64::new(j as f64 * 0.3 - 1.0, (j as f64).sin()))
            .collect();
        let mut z = vec![Complex64::new(0.0, 0.0); 16];
        op.apply(&x, &mut z);
        for (i, zi) in z.iter().enumerate() {
            let row = op.row(i);
            let direct: Complex64 = row.iter().zip(&x).map(|(a, b)| a * b).sum();
            assert!((direct - zi).norm() < 1e-12, "row {i}");
        }
    }

    #[test]
    fn adjoint_identity_holds() {
        let op = small_cdp();
        let x: Vec<Complex64> = (0..8).map(|j| Complex64::new(j as f64, 1.0)).collect();
        let z: Vec<Complex64> = (0..16)
            .map(|i| Complex64::new((i as f64).cos(), 0.5 * i as f64))
            .collect();
        let mut ax = vec![Complex64::new(0.0, 0.0); 16];
        let mut ahz = vec![Complex64::new(0.0, 0.0); 8];
        op.apply(&x, &mut ax);
        op.adjoint(&z, &mut ahz);
        let lhs = scalar::dot(&z, &ax);
        let rhs = scalar::dot(&ahz, &x);
        assert!((lhs - rhs).norm() < 1e-9);
    }

    #[test]
    fn fused_sweep_matches_separate_passes() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![-1.0, 0.5], vec![3.0, -2.0]]);
        let x = [0.7, -0.2];
        let mut ax = vec![0.0; 3];
        let mut out = vec![0.0; 2];
        a.apply_map_adjoint(&x, &mut ax, &mut |i, v| v * (i as f64 + 1.0), &mut out);
        let mut z = vec![0.0; 3];
        a.apply(&x, &mut z);
        let w: Vec<f64> = z.iter().enumerate().map(|(i, v)| v * (i as f64 + 1.0)).collect();
        let mut expect = vec![0.0; 2];
        a.adjoint(&w, &mut expect);
        assert_eq!(ax, w);
        for (u, v) in out.iter().zip(&expect) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let a = DenseMatrix::from_rows(&[vec![3.0, 0.0], vec![0.0, -5.0], vec![0.0, 0.0]]);
        assert!((spectral_norm(&a, 200) - 5.0).abs() < 1e-6);
    }

    #[test]
    fn cg_solves_normal_equations() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![0.0, 1.0], vec![1.0, -1.0]]);
        let b = [1.0, 2.0];
        let (v, res) = normal_equations_cg(&a, &b, 1e-14, 50);
        assert!(res < 1e-12);
        // A^T A = [[5, 1], [1, 3]]
        assert!((5.0 * v[0] + v[1] - 1.0).abs() < 1e-10);
        assert!((v[0] + 3.0 * v[1] - 2.0).abs() < 1e-10);
    }
}
