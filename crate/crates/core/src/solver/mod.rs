//! First-order solver for maximizing a linear or concave-quadratic objective
//! over the magnitude polytope `{x : |<a_i, x>| <= y_i}`.
//!
//! The method is a primal-dual hybrid gradient iteration on the saddle form
//!
//! ```text
//! min_x max_u  -f(x) + Re <u, A x> - sum_i y_i |u_i|
//! ```
//!
//! run in normalized units (unit-scale `y` and `c`) so that the iteration is
//! invariant to rescaling of the instance.

mod crossover;
mod gap;
mod pdhg;
mod polish;
mod problem;

pub use gap::{certify_linear, duality_gap, feasible_scaling, Certificate};
pub use pdhg::solve;
pub use problem::{project_row, NsdOperator, Objective, PolytopeProblem};

/// Default feasibility tolerance, relative to `1 + max y`.
pub const DEFAULT_TOL_FEAS: f64 = 1e-9;
/// Default stationarity tolerance.
pub const DEFAULT_TOL_STAT: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverOptions<T> {
    pub tol_feas: f64,
    pub tol_stat: f64,
    /// `None` means `50 n`.
    pub max_iters: Option<usize>,
    /// Iterations between convergence checks.
    pub check_every: usize,
    /// Known `||A||_2`; estimated by power iteration when absent.
    pub op_norm: Option<f64>,
    /// Starting primal point (original units).
    pub warm_start: Option<Vec<T>>,
    /// Starting dual point (original units), paired with `warm_start`.
    pub warm_dual: Option<Vec<T>>,
    /// Record the fixed-point merit after every iteration.
    pub record_merit: bool,
    /// Adaptive restarts to the running average with primal-weight updates.
    /// Without them the metric is fixed and the merit is globally monotone.
    pub restarts: bool,
    /// Active-set polishing of linear programs near convergence.
    pub polish: bool,
}

impl<T> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tol_feas: DEFAULT_TOL_FEAS,
            tol_stat: DEFAULT_TOL_STAT,
            max_iters: None,
            check_every: 64,
            op_norm: None,
            warm_start: None,
            warm_dual: None,
            record_merit: false,
            restarts: true,
            polish: true,
        }
    }
}

impl<T> SolverOptions<T> {
    pub fn max_iters_for(&self, n: usize) -> usize {
        self.max_iters.unwrap_or(50 * n.max(1))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<T> {
    pub x: Vec<T>,
    /// Dual multipliers `u` in original units.
    pub dual: Vec<T>,
    pub objective_value: f64,
    /// `max_i max(|<a_i, x>| - y_i, 0)`, recomputed from the returned `x`.
    pub feasibility_violation: f64,
    /// Relative certified duality gap (linear) or KKT residual (quadratic).
    pub stationarity_residual: f64,
    /// Absolute certified duality gap, linear objectives only.
    pub duality_gap: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Squared fixed-point residual in the PDHG metric, one entry per
    /// iteration, when requested.
    pub merit_trace: Vec<f64>,
    /// Iteration counts at which a restart (new metric) began.
    pub restarts: Vec<usize>,
}
