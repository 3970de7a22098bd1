use crate::error::{invalid, Error, Result};
use crate::measurement::Measurements;
use crate::operator::LinearOperator;
use crate::scalar::{self, Scalar};
use crate::solver::{self, Objective, PolytopeProblem, SolverOptions};

use super::{LampOptions, RecoveryResult, Termination};

fn check_inputs<T: Scalar, O: LinearOperator<T> + ?Sized>(op: &O, y: &Measurements, x_init: &[T]) -> Result<()> {
    if x_init.len() != op.cols() {
        return Err(Error::DimensionMismatch { expected: op.cols(), got: x_init.len() });
    }
    if y.len() != op.rows() {
        return Err(Error::DimensionMismatch { expected: op.rows(), got: y.len() });
    }
    if scalar::norm(x_init) == 0.0 {
        return Err(invalid("x_init", "initial guess must be nonzero"));
    }
    Ok(())
}

/// Single linear program `max Re <x_init, x>` over the magnitude polytope.
pub fn phasemax<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &Measurements,
    x_init: &[T],
    opts: &SolverOptions<T>,
) -> Result<RecoveryResult<T>> {
    check_inputs(op, y, x_init)?;
    let report = solver::solve(&PolytopeProblem::linear(op, y, x_init.to_vec()), opts)?;
    // one outer iteration is the whole budget
    let terminated_by = if report.converged { Termination::MaxIters } else { Termination::SolverFailure };
    Ok(RecoveryResult {
        x_hat: report.x.clone(),
        outer_iterations: 1,
        norm_trace: vec![scalar::norm_sqr(&report.x)],
        inner_reports: vec![report],
        terminated_by,
        loss_trace: Vec::new(),
    })
}

/// PhaseLamp: `x_{k+1} = argmax Re <x_k, x>` over the polytope.
pub fn phaselamp<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &Measurements,
    x_init: &[T],
    opts: &LampOptions<T>,
) -> Result<RecoveryResult<T>> {
    phaselamp_with(op, y, x_init, opts, |x| Objective::Linear(x.to_vec()))
}

/// Majorize-minimize loop over the polytope. `surrogate(x_k)` returns the
/// objective maximized at step `k`; its value must not decrease from `x_k`
/// to `x_{k+1}`.
///
/// Inner solves are warm-started from the previous primal-dual pair. When a
/// solve returns a point whose surrogate value is below that of the
/// (feasible) current iterate, the current iterate is kept and the loop stops:
/// the iterate is then a fixed point up to solver tolerance.
pub fn phaselamp_with<T, O, F>(
    op: &O,
    y: &Measurements,
    x_init: &[T],
    opts: &LampOptions<T>,
    mut surrogate: F,
) -> Result<RecoveryResult<T>>
where
    T: Scalar,
    O: LinearOperator<T> + ?Sized,
    F: FnMut(&[T]) -> Objective<T>,
{
    check_inputs(op, y, x_init)?;
    if opts.max_outer == 0 {
        return Err(invalid("max_outer", "need at least one outer iteration"));
    }
    if !(opts.eps_step >= 0.0) {
        return Err(invalid("eps_step", "must be nonnegative"));
    }

    let mut x = x_init.to_vec();
    let mut dual: Option<Vec<T>> = None;
    let mut norm_trace = Vec::new();
    let mut inner_reports = Vec::new();
    let mut terminated_by = Termination::MaxIters;
    for k in 0..opts.max_outer {
        let objective = surrogate(&x);
        let degenerate = match &objective {
            Objective::Linear(c) => scalar::norm(c) == 0.0,
            Objective::ConcaveQuadratic { q, b } => q.is_zero() && scalar::norm(b) == 0.0,
        };
        if scalar::norm(&x) == 0.0 || degenerate {
            terminated_by = Termination::ZeroDirection;
            break;
        }
        let mut sopts = opts.solver.clone();
        sopts.warm_start = Some(x.clone());
        sopts.warm_dual = dual.take();
        let problem = PolytopeProblem::new(op, y, objective);
        let report = solver::solve(&problem, &sopts)?;
        let converged = report.converged;

        if k > 0 && problem.objective.value(&report.x) < problem.objective.value(&x) {
            inner_reports.push(report);
            terminated_by = if converged { Termination::StepTolerance } else { Termination::SolverFailure };
            break;
        }
        let step = scalar::dist(&report.x, &x);
        x.clone_from(&report.x);
        dual = Some(report.dual.clone());
        norm_trace.push(scalar::norm_sqr(&x));
        inner_reports.push(report);
        if !converged {
            terminated_by = Termination::SolverFailure;
            break;
        }
        if step <= opts.eps_step {
            terminated_by = Termination::StepTolerance;
            break;
        }
    }
    Ok(RecoveryResult {
        x_hat: x,
        outer_iterations: inner_reports.len(),
        norm_trace,
        inner_reports,
        terminated_by,
        loss_trace: Vec::new(),
    })
}
