use crate::error::{invalid, Error, Result};
use crate::operator::{self, LinearOperator};
use crate::scalar::{self, Scalar};

use super::gap::{certify_linear, feasible_scaling};
use super::crossover::crossover;
use super::polish::{polish, Polished};
use super::problem::{max_violation, shrink, NsdOperator, Objective, PolytopeProblem};
use super::{SolveReport, SolverOptions};

const POWER_ITERS: usize = 60;
/// Safety factor on `tau sigma ||A||^2 < 1`, covering the power-iteration
/// underestimate of `||A||`.
const STEP_FACTOR: f64 = 0.9;
const MIN_DENOM: f64 = 1e-300;
const MIN_STEP: f64 = 1e-12;

// adaptive restart schedule (PDLP-style)
const RESTART_SUFFICIENT: f64 = 0.2;
const RESTART_NECESSARY: f64 = 0.8;
const RESTART_ARTIFICIAL: f64 = 0.36;
const PRIMAL_WEIGHT_SMOOTHING: f64 = 0.5;

// active-set polishing is first tried at this KKT error, then again each
// time the error has dropped by `POLISH_DECAY`
const POLISH_START: f64 = 1e-3;
const POLISH_DECAY: f64 = 0.3;
const CROSSOVER_PIVOTS_PER_DIM: usize = 2;
const CROSSOVER_MAX_SUPPORT: f64 = 1.25;

/// Objective in normalized units.
enum Scaled<T> {
    /// Unit-norm cost and the scaled value of one unit of the original
    /// objective.
    Linear(Vec<T>, f64),
    Quadratic { q: NsdOperator<T>, q_scale: f64, b: Vec<T> },
}

impl<T: Scalar> Scaled<T> {
    fn gradient_into(&self, x: &[T], out: &mut [T]) {
        match self {
            Scaled::Linear(c, _) => out.copy_from_slice(c),
            Scaled::Quadratic { q, q_scale, b } => {
                q.apply(x, out);
                let k = 2.0 * q_scale;
                out.iter_mut().zip(b).for_each(|(o, &bi)| *o = o.scale(k) + bi);
            }
        }
    }

    fn lipschitz(&self) -> f64 {
        match self {
            Scaled::Linear(..) => 0.0,
            Scaled::Quadratic { q, q_scale, .. } => 2.0 * q_scale * q.norm(),
        }
    }
}

/// Primal-dual pair with cached `A x` and `A^H u`.
#[derive(Clone)]
struct Iterate<T> {
    x: Vec<T>,
    u: Vec<T>,
    ax: Vec<T>,
    atu: Vec<T>,
}

impl<T: Scalar> Iterate<T> {
    fn new(n: usize, m: usize) -> Self {
        Self {
            x: vec![T::zero(); n],
            u: vec![T::zero(); m],
            ax: vec![T::zero(); m],
            atu: vec![T::zero(); n],
        }
    }

    fn accumulate(&mut self, other: &Self) {
        let add = |a: &mut [T], b: &[T]| a.iter_mut().zip(b).for_each(|(p, &q)| *p += q);
        add(&mut self.x, &other.x);
        add(&mut self.u, &other.u);
        add(&mut self.ax, &other.ax);
        add(&mut self.atu, &other.atu);
    }

    fn mean(&self, count: usize) -> Self {
        let k = 1.0 / count.max(1) as f64;
        Self {
            x: scalar::scaled(&self.x, k),
            u: scalar::scaled(&self.u, k),
            ax: scalar::scaled(&self.ax, k),
            atu: scalar::scaled(&self.atu, k),
        }
    }
}

struct Checkpoint<T> {
    x: Vec<T>,
    u: Vec<T>,
    error: f64,
}

/// Solves the polytope program by primal-dual hybrid gradient iterations.
///
/// Never panics on hard instances: when `max_iters` is exhausted the best
/// checkpoint (smallest KKT error) is returned with `converged = false`.
/// The returned `x` is always scaled into the polytope along its ray, and
/// its violation is recomputed from scratch.
pub fn solve<T: Scalar, O: LinearOperator<T> + ?Sized>(
    problem: &PolytopeProblem<'_, T, O>,
    opts: &SolverOptions<T>,
) -> Result<SolveReport<T>> {
    let op = problem.op;
    let (m, n) = (op.rows(), op.cols());
    let y_orig = problem.y.as_slice();
    if y_orig.len() != m {
        return Err(Error::DimensionMismatch { expected: m, got: y_orig.len() });
    }
    if problem.objective.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: problem.objective.dim() });
    }
    if m == 0 || n == 0 {
        return Err(invalid("problem", "operator must have at least one row and one column"));
    }
    if !(opts.tol_feas > 0.0 && opts.tol_stat > 0.0) {
        return Err(invalid("tolerance", "tolerances must be positive"));
    }
    if opts.check_every == 0 {
        return Err(invalid("check_every", "must be at least 1"));
    }
    for (name, v) in [("warm_start", &opts.warm_start), ("warm_dual", &opts.warm_dual)] {
        let want = if name == "warm_start" { n } else { m };
        if let Some(v) = v {
            if v.len() != want {
                return Err(Error::DimensionMismatch { expected: want, got: v.len() });
            }
        }
    }

    // normalized units: x = y_scale x_hat, u = (k / y_scale) u_hat
    let y_max = problem.y.max();
    let y_scale = if y_max > 0.0 { y_max } else { 1.0 };
    let y: Vec<f64> = y_orig.iter().map(|v| v / y_scale).collect();
    let (scaled, k) = match &problem.objective {
        Objective::Linear(c) => {
            let cn = scalar::norm(c);
            let k = y_scale * cn;
            (Scaled::Linear(scalar::scaled(c, 1.0 / cn.max(MIN_DENOM)), 1.0 / k.max(MIN_DENOM)), k)
        }
        Objective::ConcaveQuadratic { q, b } => {
            let k = (y_scale * scalar::norm(b)).max(y_scale * y_scale * q.norm());
            let kk = k.max(MIN_DENOM);
            (
                Scaled::Quadratic {
                    q: q.clone(),
                    q_scale: y_scale * y_scale / kk,
                    b: scalar::scaled(b, y_scale / kk),
                },
                k,
            )
        }
    };
    if k == 0.0 {
        return Ok(trivial_report(problem, opts));
    }

    let a_norm = opts
        .op_norm
        .unwrap_or_else(|| operator::spectral_norm(op, POWER_ITERS))
        .max(MIN_DENOM);
    let lipschitz = scaled.lipschitz();
    let steps = |omega: f64| {
        let eta = STEP_FACTOR / a_norm;
        (1.0 / (omega / eta + lipschitz / 2.0), eta * omega)
    };
    // initial primal weight: ratio of dual to primal scales
    let mut omega = 1.0 / scalar::norm(&y).max(MIN_DENOM);
    let (mut tau, mut sigma) = steps(omega);

    let mut cur = Iterate::new(n, m);
    if let Some(w) = &opts.warm_start {
        cur.x = scalar::scaled(w, 1.0 / y_scale);
    }
    if let Some(w) = &opts.warm_dual {
        cur.u = scalar::scaled(w, y_scale / k);
    }
    op.apply(&cur.x, &mut cur.ax);
    op.adjoint(&cur.u, &mut cur.atu);

    let mut grad = vec![T::zero(); n];
    let mut x_next = vec![T::zero(); n];
    let mut x_bar = vec![T::zero(); n];
    let mut z_bar = vec![T::zero(); m];
    let mut u_next = vec![T::zero(); m];
    let mut merit_trace = Vec::new();
    let mut restarts = Vec::new();

    let max_iters = opts.max_iters_for(n);
    let mut avg = Iterate::new(n, m);
    let mut avg_count = 0usize;
    let mut anchor = (cur.x.clone(), cur.u.clone());
    let mut anchor_error = f64::INFINITY;
    let mut last_candidate_error = f64::INFINITY;
    let mut epoch_start = 0usize;
    let mut best: Option<Checkpoint<T>> = None;
    let mut gate = 1.0;
    let mut polish_gate = if opts.polish { POLISH_START } else { -1.0 };
    let mut iterations = 0;
    let mut certified = None;

    while iterations < max_iters {
        iterations += 1;
        scaled.gradient_into(&cur.x, &mut grad);
        for i in 0..n {
            x_next[i] = cur.x[i] + (grad[i] - cur.atu[i]).scale(tau);
            x_bar[i] = x_next[i].scale(2.0) - cur.x[i];
        }
        {
            let u_prev = &cur.u;
            let z = &mut z_bar;
            let y = &y;
            let mut map = |i: usize, zi: T| {
                z[i] = zi;
                shrink(u_prev[i] + zi.scale(sigma), sigma * y[i])
            };
            op.apply_map_adjoint(&x_bar, &mut u_next, &mut map, &mut cur.atu);
        }
        let merit = finish_step(&mut cur, &x_next, &u_next, &z_bar, tau, sigma, opts.record_merit);
        if let Some(mv) = merit {
            merit_trace.push(mv);
        }
        avg.accumulate(&cur);
        avg_count += 1;

        if iterations % opts.check_every != 0 && iterations != max_iters {
            continue;
        }
        // refresh A x to remove drift from the recurrence
        op.apply(&cur.x, &mut cur.ax);
        let cur_err = kkt_error(&scaled, &y, &cur, &mut grad);
        let mean = avg.mean(avg_count);
        let avg_err = kkt_error(&scaled, &y, &mean, &mut grad);
        let use_avg = opts.restarts && avg_err < cur_err;
        let (cand, cand_err) = if use_avg { (&mean, avg_err) } else { (&cur, cur_err) };

        if best.as_ref().is_none_or(|b| cand_err < b.error) {
            best = Some(Checkpoint {
                x: cand.x.clone(),
                u: cand.u.clone(),
                error: cand_err,
            });
        }
        let pinf = max_violation(&cand.ax, &y).max(0.0);
        if pinf <= opts.tol_feas && cand_err <= gate * opts.tol_stat {
            let stat = stationarity(op, &y, &scaled, &cand.x, &cand.u);
            if stat <= opts.tol_stat {
                certified = Some((cand.x.clone(), cand.u.clone(), stat));
                break;
            }
            gate *= 0.1;
        }

        if let Scaled::Linear(c, _) = &scaled {
            if cur_err.min(cand_err) <= polish_gate {
                polish_gate = cur_err.min(cand_err) * POLISH_DECAY;
                let done = polish(op, &y, c, &cur.x, &cur.u)
                    .and_then(|p| accept(op, &y, &scaled, p, opts));
                let done = done
                    .or_else(|| {
                        // a dual support much larger than n signals a
                        // degenerate vertex, where pivoting stalls
                        let support = cur.u.iter().filter(|v| **v != T::zero()).count();
                        if support as f64 > CROSSOVER_MAX_SUPPORT * n as f64 {
                            return None;
                        }
                        let limit = CROSSOVER_PIVOTS_PER_DIM * n;
                        crossover(op, &y, c, &cand.x, &cur.u, limit)
                            .and_then(|p| accept(op, &y, &scaled, p, opts))
                    });
                if let Some(done) = done {
                    certified = Some(done);
                    break;
                }
            }
        }

        if !opts.restarts {
            continue;
        }
        let since = iterations - epoch_start;
        let restart = cand_err <= RESTART_SUFFICIENT * anchor_error
            || (cand_err <= RESTART_NECESSARY * anchor_error && cand_err > last_candidate_error)
            || since as f64 >= RESTART_ARTIFICIAL * iterations as f64;
        last_candidate_error = cand_err;
        if !restart {
            continue;
        }
        if use_avg {
            cur = mean;
            op.apply(&cur.x, &mut cur.ax);
        }
        let dx = scalar::dist(&cur.x, &anchor.0);
        let du = scalar::dist(&cur.u, &anchor.1);
        if dx > MIN_STEP && du > MIN_STEP {
            omega = (PRIMAL_WEIGHT_SMOOTHING * (du / dx).ln()
                + (1.0 - PRIMAL_WEIGHT_SMOOTHING) * omega.ln())
            .exp();
            (tau, sigma) = steps(omega);
        }
        anchor = (cur.x.clone(), cur.u.clone());
        anchor_error = cand_err;
        last_candidate_error = f64::INFINITY;
        avg = Iterate::new(n, m);
        avg_count = 0;
        epoch_start = iterations;
        restarts.push(iterations);
    }

    let (x_hat, u_hat, stat) = match (certified, best) {
        (Some(c), _) => c,
        (None, Some(b)) => {
            let s = stationarity(op, &y, &scaled, &b.x, &b.u);
            (b.x, b.u, s)
        }
        (None, None) => {
            let s = stationarity(op, &y, &scaled, &cur.x, &cur.u);
            (cur.x, cur.u, s)
        }
    };
    let converged_inner = stat <= opts.tol_stat;
    let mut ax = vec![T::zero(); m];
    // back to original units, then shrink onto the polytope
    let mut x_out = scalar::scaled(&x_hat, y_scale);
    let dual = scalar::scaled(&u_hat, k / y_scale);
    op.apply(&x_out, &mut ax);
    let t = feasible_scaling(&ax, y_orig);
    if t < 1.0 {
        x_out.iter_mut().for_each(|v| *v = v.scale(t));
    }
    let feasibility_violation = problem.feasibility_violation(&x_out);
    let duality_gap = match &problem.objective {
        Objective::Linear(c) => Some(certify_linear(op, y_orig, c, &x_out, &dual).gap()),
        Objective::ConcaveQuadratic { .. } => None,
    };
    let converged = converged_inner
        && feasibility_violation <= opts.tol_feas * (1.0 + y_max);
    Ok(SolveReport {
        objective_value: problem.objective.value(&x_out),
        x: x_out,
        dual,
        feasibility_violation,
        stationarity_residual: stat,
        duality_gap,
        iterations,
        converged,
        merit_trace,
        restarts,
    })
}

/// Commits one PDHG step and returns the squared fixed-point residual in
/// the metric `M = [[I/tau, -A^H], [-A, I/sigma]]` when requested.
/// `cur.atu` already holds `A^H u_next`.
fn finish_step<T: Scalar>(
    cur: &mut Iterate<T>,
    x_next: &[T],
    u_next: &[T],
    z_bar: &[T],
    tau: f64,
    sigma: f64,
    record: bool,
) -> Option<f64> {
    let mut merit = None;
    if record {
        let dx_sq: f64 = cur.x.iter().zip(x_next).map(|(&a, &b)| (b - a).abs_sqr()).sum();
        let mut du_sq = 0.0;
        let mut cross = 0.0;
        for i in 0..cur.u.len() {
            let du = u_next[i] - cur.u[i];
            // A dx = A x_next - A x = (A x_bar - A x) / 2
            let adx = (z_bar[i] - cur.ax[i]).scale(0.5);
            du_sq += du.abs_sqr();
            cross += (du.conj() * adx).re();
        }
        merit = Some(dx_sq / tau + du_sq / sigma - 2.0 * cross);
    }
    cur.x.copy_from_slice(x_next);
    cur.u.copy_from_slice(u_next);
    for (a, &z) in cur.ax.iter_mut().zip(z_bar) {
        *a = (*a + z).scale(0.5);
    }
    merit
}

/// Relative KKT error: primal infeasibility, dual residual and
/// complementarity, each in normalized units.
fn kkt_error<T: Scalar>(scaled: &Scaled<T>, y: &[f64], it: &Iterate<T>, grad: &mut [T]) -> f64 {
    let pinf = it
        .ax
        .iter()
        .zip(y)
        .map(|(z, &yi)| (z.abs() - yi).max(0.0).powi(2))
        .sum::<f64>()
        .sqrt();
    scaled.gradient_into(&it.x, grad);
    let dres = scalar::dist(&it.atu, grad) / (1.0 + scalar::norm(grad));
    let dual_obj: f64 = it.u.iter().zip(y).map(|(ui, &yi)| yi * ui.abs()).sum();
    let lag = scalar::dot(&it.u, &it.ax).re();
    let comp = (dual_obj - lag).abs() / (1.0 + dual_obj);
    (pinf * pinf + dres * dres + comp * comp).sqrt()
}

/// Certifies a polished pair; returns it with its stationarity when it
/// meets both tolerances.
fn accept<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &[f64],
    scaled: &Scaled<T>,
    p: Polished<T>,
    opts: &SolverOptions<T>,
) -> Option<(Vec<T>, Vec<T>, f64)> {
    let mut z = vec![T::zero(); op.rows()];
    op.apply(&p.x, &mut z);
    if max_violation(&z, y) > opts.tol_feas {
        return None;
    }
    let stat = stationarity(op, y, scaled, &p.x, &p.u);
    (stat <= opts.tol_stat).then_some((p.x, p.u, stat))
}

/// Certified duality gap relative to `max(1, |objective|)` (linear) or KKT residual (quadratic), at
/// the feasibility-scaled point.
fn stationarity<T: Scalar, O: LinearOperator<T> + ?Sized>(
    op: &O,
    y: &[f64],
    scaled: &Scaled<T>,
    x: &[T],
    u: &[T],
) -> f64 {
    match scaled {
        Scaled::Linear(c, unit) => {
            let cert = certify_linear(op, y, c, x, u);
            // absolute in original units while |objective| <= 1, relative beyond
            let denom = cert.dual_bound.abs().max(cert.primal_value.abs()).max(*unit).max(MIN_DENOM);
            let rel_gap = (cert.dual_bound - cert.primal_value).abs() / denom;
            rel_gap.max(cert.dual_residual)
        }
        Scaled::Quadratic { .. } => {
            let n = x.len();
            let mut z = vec![T::zero(); op.rows()];
            op.apply(x, &mut z);
            let t = feasible_scaling(&z, y);
            let xf = scalar::scaled(x, t);
            z.iter_mut().for_each(|v| *v = v.scale(t));
            let mut grad = vec![T::zero(); n];
            scaled.gradient_into(&xf, &mut grad);
            let mut atu = vec![T::zero(); n];
            op.adjoint(u, &mut atu);
            let dres = scalar::dist(&atu, &grad) / (1.0 + scalar::norm(&grad));
            let dual_obj: f64 = u.iter().zip(y).map(|(ui, &yi)| yi * ui.abs()).sum();
            let lag = scalar::dot(u, &z).re();
            dres.max((dual_obj - lag).abs() / (1.0 + dual_obj))
        }
    }
}

/// Zero objective: every feasible point is optimal.
fn trivial_report<T: Scalar, O: LinearOperator<T> + ?Sized>(
    problem: &PolytopeProblem<'_, T, O>,
    opts: &SolverOptions<T>,
) -> SolveReport<T> {
    let n = problem.op.cols();
    let m = problem.op.rows();
    let mut x = opts.warm_start.clone().unwrap_or_else(|| vec![T::zero(); n]);
    let mut z = vec![T::zero(); m];
    problem.op.apply(&x, &mut z);
    let t = feasible_scaling(&z, problem.y.as_slice());
    x.iter_mut().for_each(|v| *v = v.scale(t));
    let feasibility_violation = problem.feasibility_violation(&x);
    SolveReport {
        objective_value: problem.objective.value(&x),
        x,
        dual: vec![T::zero(); m],
        feasibility_violation,
        stationarity_residual: 0.0,
        duality_gap: matches!(problem.objective, Objective::Linear(_)).then_some(0.0),
        iterations: 0,
        converged: feasibility_violation <= opts.tol_feas * (1.0 + problem.y.max()),
        merit_trace: Vec::new(),
        restarts: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::measurement::{measure_with, Measurements};
    use crate::operator::DenseMatrix;
    use crate::oracle::vertex_oracle;
    use crate::rng;

    fn gaussian<T: Scalar>(m: usize, n: usize, seed: u64) -> (DenseMatrix<T>, Vec<T>, Measurements) {
        let mut g = rng::stream(seed);
        let a = DenseMatrix::from_row_major(m, n, (0..m * n).map(|_| T::sample_normal(&mut g)).collect());
        let xi: Vec<T> = (0..n).map(|_| T::sample_normal(&mut g)).collect();
        let y = measure_with(&a, &xi).unwrap();
        (a, xi, y)
    }

    #[test]
    fn one_dimensional_interval_endpoint() {
        let a = DenseMatrix::from_rows(&[vec![1.0]]);
        let y = Measurements::new(vec![1.0]).unwrap();
        let rep = solve(&PolytopeProblem::linear(&a, &y, vec![1.0]), &SolverOptions::default()).unwrap();
        assert!(rep.converged);
        assert!((rep.x[0] - 1.0).abs() < 1e-12 && (rep.objective_value - 1.0).abs() < 1e-12);
        assert!(rep.duality_gap.unwrap() <= 1e-10);
    }

    #[test]
    fn small_instances_match_vertex_enumeration() {
        for seed in 0..20 {
            let (a, _, y) = gaussian::<f64>(3, 2, seed);
            let c: Vec<f64> = (0..2).map(|_| f64::sample_normal(&mut rng::stream(seed + 100))).collect();
            let best = vertex_oracle(&a, y.as_slice(), &c).unwrap().unwrap();
            let opts = SolverOptions { max_iters: Some(100_000), ..Default::default() };
            let rep = solve(&PolytopeProblem::linear(&a, &y, c), &opts).unwrap();
            assert!((rep.objective_value - best.value).abs() <= 1e-6, "seed {seed}");
        }
    }

    #[test]
    fn objective_dominates_the_target_value() {
        for seed in 0..5 {
            let (a, xi, y) = gaussian::<f64>(120, 30, seed);
            let mut g = rng::stream(seed + 7);
            let x0: Vec<f64> = xi.iter().map(|v| v + 2.0 * f64::sample_normal(&mut g)).collect();
            let rep = solve(&PolytopeProblem::linear(&a, &y, x0.clone()), &SolverOptions::default()).unwrap();
            assert!(rep.converged);
            assert!(rep.objective_value >= scalar::dot(&x0, &xi) - 1e-8);
            assert!(rep.feasibility_violation <= 1e-9 * (1.0 + y.max()));
        }
    }

    #[test]
    fn complex_disks_certify() {
        let (a, xi, y) = gaussian::<Complex64>(96, 16, 3);
        let c: Vec<Complex64> = xi.iter().map(|v| v * Complex64::new(0.6, 0.8)).collect();
        let rep = solve(&PolytopeProblem::linear(&a, &y, c.clone()), &SolverOptions::default()).unwrap();
        assert!(rep.converged);
        assert!(rep.duality_gap.unwrap() <= 1e-7);
        assert!(rep.objective_value >= scalar::dot(&c, &xi).re() - 1e-8);
    }

    #[test]
    fn budget_exhaustion_returns_feasible_best_iterate() {
        let (a, xi, y) = gaussian::<f64>(80, 20, 4);
        let opts = SolverOptions { max_iters: Some(3), polish: false, ..Default::default() };
        let rep = solve(&PolytopeProblem::linear(&a, &y, xi), &opts).unwrap();
        assert!(!rep.converged);
        assert_eq!(rep.iterations, 3);
        assert!(rep.feasibility_violation <= 1e-12 * y.max());
    }

    #[test]
    fn merit_is_monotone_without_restarts() {
        let (a, xi, y) = gaussian::<f64>(60, 12, 5);
        let opts = SolverOptions {
            max_iters: Some(2000),
            restarts: false,
            polish: false,
            record_merit: true,
            ..Default::default()
        };
        let rep = solve(&PolytopeProblem::linear(&a, &y, xi.iter().map(|v| v + 0.3).collect()), &opts).unwrap();
        assert!(!rep.merit_trace.is_empty() && rep.restarts.is_empty());
        for w in rep.merit_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12 * (1.0 + w[0]), "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn concave_quadratic_on_a_box() {
        // maximize -|x|^2 + <b, x> over |x_i| <= 1: x = clip(b / 2)
        let a = DenseMatrix::<f64>::identity(3);
        let y = Measurements::new(vec![1.0; 3]).unwrap();
        let q = NsdOperator::from_eigenpairs(
            3,
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            vec![-1.0; 3],
        );
        let b = vec![1.0, -4.0, 0.5];
        let problem = PolytopeProblem::new(&a, &y, Objective::ConcaveQuadratic { q, b });
        let rep = solve(&problem, &SolverOptions { max_iters: Some(20_000), ..Default::default() }).unwrap();
        assert!(rep.converged && rep.duality_gap.is_none());
        for (x, want) in rep.x.iter().zip([0.5, -1.0, 0.25]) {
            assert!((x - want).abs() < 1e-6, "{:?}", rep.x);
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        let a = DenseMatrix::<f64>::identity(2);
        let y = Measurements::new(vec![1.0, 1.0]).unwrap();
        let p = PolytopeProblem::linear(&a, &y, vec![1.0, 0.0]);
        assert!(solve(&p, &SolverOptions { tol_feas: 0.0, ..Default::default() }).is_err());
        assert!(solve(&p, &SolverOptions { check_every: 0, ..Default::default() }).is_err());
        assert!(solve(&p, &SolverOptions { warm_start: Some(vec![0.0; 3]), ..Default::default() }).is_err());
        assert!(solve(&PolytopeProblem::linear(&a, &y, vec![1.0]), &SolverOptions::default()).is_err());
    }

    #[test]
    fn zero_cost_returns_warm_start_scaled_into_polytope() {
        let a = DenseMatrix::<f64>::identity(2);
        let y = Measurements::new(vec![1.0, 1.0]).unwrap();
        let opts = SolverOptions { warm_start: Some(vec![4.0, 2.0]), ..Default::default() };
        let rep = solve(&PolytopeProblem::linear(&a, &y, vec![0.0, 0.0]), &opts).unwrap();
        assert_eq!(rep.x, vec![1.0, 0.5]);
        assert!(rep.converged && rep.iterations == 0);
    }
}
