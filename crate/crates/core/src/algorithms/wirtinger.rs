use crate::error::{invalid, Error, Result};
use crate::measurement::{spectral_init, Measurements, Preprocessing};
use crate::operator::LinearOperator;
use crate::scalar::{self, Scalar};

use super::{RecoveryResult, Termination};

/// Scale of the default step relative to `1 / lambda_max(D)`, `omega(y) = y^2`.
pub const DEFAULT_STEP_SCALE: f64 = 0.1;

fn check<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, y: &Measurements, x: &[T]) -> Result<()> {
    if x.len() != op.cols() {
        return Err(Error::DimensionMismatch { expected: op.cols(), got: x.len() });
    }
    if y.len() != op.rows() {
        return Err(Error::DimensionMismatch { expected: op.rows(), got: y.len() });
    }
    Ok(())
}

/// Intensity loss `(1/4m) sum_i (|<a_i, x>|^2 - y_i^2)^2`.
pub fn wirtinger_loss<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, y: &Measurements, x: &[T]) -> Result<f64> {
    check(op, y, x)?;
    let mut z = vec![T::zero(); op.rows()];
    op.apply(x, &mut z);
    Ok(loss_of(&z, y.as_slice()))
}

fn loss_of<T: Scalar>(z: &[T], y: &[f64]) -> f64 {
    let s: f64 = z.iter().zip(y).map(|(zi, yi)| (zi.abs_sqr() - yi * yi).powi(2)).sum();
    s / (4.0 * z.len() as f64)
}

/// `(1/m) A^H [(|A x|^2 - y^2) .* A x]`; for real data this is the ordinary
/// gradient of the loss.
pub fn wirtinger_gradient<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &Measurements,
    x: &[T],
) -> Result<Vec<T>> {
    check(op, y, x)?;
    let mut z = vec![T::zero(); op.rows()];
    let mut g = vec![T::zero(); op.cols()];
    gradient_into(op, y.as_slice(), x, &mut z, &mut g);
    Ok(g)
}

/// Fills `g` with the gradient at `x` and `z` with `A x`.
fn gradient_into<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, y: &[f64], x: &[T], z: &mut [T], g: &mut [T]) {
    let inv_m = 1.0 / op.rows() as f64;
    op.apply_map_adjoint(x, z, &mut |i, zi| zi.scale((zi.abs_sqr() - y[i] * y[i]) * inv_m), g);
}

/// `0.1 / lambda_max(D)` with `D = (1/m) A^H diag(y^2) A`.
pub fn wirtinger_step_size<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, y: &Measurements) -> Result<f64> {
    let spec = spectral_init::<T, O>(op, y, &Preprocessing::Square, 1000, None)?;
    if !(spec.eigenvalue > 0.0) {
        return Err(Error::Numerical("weighted matrix has no positive eigenvalue".into()));
    }
    Ok(DEFAULT_STEP_SCALE / spec.eigenvalue)
}

/// Plain gradient descent on the intensity loss; `step_size = None` uses
/// [`wirtinger_step_size`].
pub fn wirtinger_flow<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &Measurements,
    x_init: &[T],
    steps: usize,
    step_size: Option<f64>,
) -> Result<RecoveryResult<T>> {
    check(op, y, x_init)?;
    if steps == 0 {
        return Err(invalid("steps", "need at least one gradient step"));
    }
    let mu = match step_size {
        Some(mu) if mu > 0.0 && mu.is_finite() => mu,
        Some(mu) => return Err(invalid("step_size", format!("must be positive and finite, got {mu}"))),
        None => wirtinger_step_size(op, y)?,
    };
    let yv = y.as_slice();
    let mut x = x_init.to_vec();
    let mut z = vec![T::zero(); op.rows()];
    let mut g = vec![T::zero(); op.cols()];
    let mut loss_trace = Vec::with_capacity(steps);
    let mut norm_trace = Vec::with_capacity(steps);
    let mut taken = 0;
    for _ in 0..steps {
        gradient_into(op, yv, &x, &mut z, &mut g);
        scalar::axpy(T::from_real(-mu), &g, &mut x);
        taken += 1;
        op.apply(&x, &mut z);
        let loss = loss_of(&z, yv);
        loss_trace.push(loss);
        norm_trace.push(scalar::norm_sqr(&x));
        if !loss.is_finite() {
            break;
        }
    }
    Ok(RecoveryResult {
        x_hat: x,
        outer_iterations: taken,
        norm_trace,
        inner_reports: Vec::new(),
        terminated_by: Termination::MaxIters,
        loss_trace,
    })
}
