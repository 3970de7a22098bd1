use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algorithms::{
    phasemax, phaselamp, wirtinger_flow, wphaselamp, Algorithm, LampOptions, RecoveryResult, Termination,
};
use crate::error::{invalid, Result};
use crate::measurement::{
    aligned_coordinates, cosine_similarity, make_ensemble, make_init, measure_with, nmse, random_init,
    random_signal, spectral_init, EnsembleKind, Measurements, Preprocessing,
};
use crate::operator::LinearOperator;
use crate::rng::{derive_seed, tag, trial_seed};
use crate::scalar::Scalar;
use crate::solver::SolverOptions;

use super::config::{ExperimentConfig, InitKind, RhoSpec};

/// Position of a trial inside a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TrialIndex {
    pub alpha_index: usize,
    pub rho_index: usize,
    pub trial: usize,
}

/// One Monte Carlo trial. Failed trials keep their coordinates, carry
/// `converged = false`, NaN metrics and the error text.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algorithm: Algorithm,
    pub ensemble: EnsembleKind,
    pub index: TrialIndex,
    pub n: usize,
    pub m: usize,
    pub alpha: f64,
    /// `cosine`, `spectral` or `random`.
    pub init: String,
    pub rho_init_requested: Option<f64>,
    pub rho_init_measured: f64,
    pub seed: u64,
    pub nmse: f64,
    /// Aligned component of the estimate along the target.
    pub s: f64,
    /// Norm of the component orthogonal to the target.
    pub r: f64,
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub converged: bool,
    pub terminated_by: Option<Termination>,
    pub error: Option<String>,
    pub wall_ms: f64,
}

impl TrialRecord {
    pub fn succeeded(&self, threshold: f64) -> bool {
        self.nmse < threshold
    }
}

/// Everything a trial produces besides bookkeeping.
struct Outcome {
    m: usize,
    rho_measured: f64,
    nmse: f64,
    s: f64,
    r: f64,
    outer: usize,
    inner: usize,
    converged: bool,
    terminated_by: Termination,
}

pub(crate) fn solver_options<T>(cfg: &ExperimentConfig) -> SolverOptions<T> {
    SolverOptions { tol_feas: cfg.tol_feas, tol_stat: cfg.tol_stat, max_iters: cfg.max_iters, ..Default::default() }
}

pub(crate) fn lamp_options<T>(cfg: &ExperimentConfig) -> LampOptions<T> {
    LampOptions { max_outer: cfg.max_outer, eps_step: cfg.eps_step, solver: solver_options(cfg) }
}

/// Runs the configured algorithm from `x_init`.
pub fn recover<T: Scalar, O: LinearOperator<T> + ?Sized>(
    cfg: &ExperimentConfig,
    op: &O,
    y: &Measurements,
    x_init: &[T],
) -> Result<RecoveryResult<T>> {
    match cfg.algorithm {
        Algorithm::PhaseMax => phasemax(op, y, x_init, &solver_options(cfg)),
        Algorithm::PhaseLamp => phaselamp(op, y, x_init, &lamp_options(cfg)),
        Algorithm::WPhaseLamp => wphaselamp(op, y, x_init, &Preprocessing::from(cfg.omega), &lamp_options(cfg)),
        Algorithm::WirtingerFlow => wirtinger_flow(op, y, x_init, cfg.wf_steps, cfg.wf_step_size),
    }
}

fn run_on<T: Scalar, O: LinearOperator<T> + ?Sized>(
    cfg: &ExperimentConfig,
    op: &O,
    rho: RhoSpec,
    seed: u64,
) -> Result<Outcome> {
    let n = op.cols();
    let xi: Vec<T> = random_signal(n, derive_seed(seed, &[tag::SIGNAL]));
    let y = measure_with(op, &xi)?;
    let init_seed = derive_seed(seed, &[tag::INIT]);
    let x_init = match rho {
        RhoSpec::Cosine(r) => make_init(&xi, r, init_seed)?.x,
        RhoSpec::Init(InitKind::Random) => random_init(n, init_seed).x,
        RhoSpec::Init(InitKind::Spectral) => {
            spectral_init(op, &y, &Preprocessing::from(cfg.omega), cfg.spectral_iters, None)?.guess.x
        }
    };
    let res = recover(cfg, op, &y, &x_init)?;
    let (s, r) = aligned_coordinates(&res.x_hat, &xi)?;
    Ok(Outcome {
        m: op.rows(),
        rho_measured: cosine_similarity(&x_init, &xi)?,
        nmse: nmse(&res.x_hat, &xi)?,
        s,
        r,
        outer: res.outer_iterations,
        inner: res.inner_reports.iter().map(|r| r.iterations).sum(),
        converged: res.solves_converged() && res.terminated_by != Termination::SolverFailure,
        terminated_by: res.terminated_by,
    })
}

fn run_outcome(cfg: &ExperimentConfig, alpha: f64, rho: RhoSpec, seed: u64) -> Result<Outcome> {
    let ensemble = make_ensemble(cfg.ensemble, cfg.n, alpha, derive_seed(seed, &[tag::ENSEMBLE]))?;
    if let Some(a) = ensemble.real() {
        run_on::<f64, _>(cfg, a, rho, seed)
    } else if let Some(a) = ensemble.complex() {
        run_on::<Complex64, _>(cfg, a, rho, seed)
    } else {
        Err(invalid("ensemble", "ensemble exposes neither a real nor a complex operator"))
    }
}

fn expected_rows(cfg: &ExperimentConfig, alpha: f64) -> usize {
    match cfg.ensemble {
        EnsembleKind::CodedDiffraction => cfg.n * alpha.max(0.0) as usize,
        _ => crate::measurement::gaussian_rows(cfg.n, alpha),
    }
}

/// Runs one trial of a sweep. Errors and panics inside the trial are
/// captured in the record.
pub fn run_trial(cfg: &ExperimentConfig, index: TrialIndex) -> TrialRecord {
    let alpha = cfg.alpha_grid[index.alpha_index];
    let rho = cfg.rho_grid[index.rho_index];
    let seed = trial_seed(cfg.master_seed, index.alpha_index, index.rho_index, index.trial);
    let start = Instant::now();
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| run_outcome(cfg, alpha, rho, seed)))
        .unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "trial panicked".into());
            Err(crate::error::Error::Numerical(msg))
        });
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut rec = TrialRecord {
        algorithm: cfg.algorithm,
        ensemble: cfg.ensemble,
        index,
        n: cfg.n,
        m: expected_rows(cfg, alpha),
        alpha,
        init: rho.label(),
        rho_init_requested: rho.requested(),
        rho_init_measured: f64::NAN,
        seed,
        nmse: f64::NAN,
        s: f64::NAN,
        r: f64::NAN,
        outer_iterations: 0,
        inner_iterations: 0,
        converged: false,
        terminated_by: None,
        error: None,
        wall_ms,
    };
    match outcome {
        Ok(o) => {
            rec.m = o.m;
            rec.rho_init_measured = o.rho_measured;
            rec.nmse = o.nmse;
            rec.s = o.s;
            rec.r = o.r;
            rec.outer_iterations = o.outer;
            rec.inner_iterations = o.inner;
            rec.converged = o.converged;
            rec.terminated_by = Some(o.terminated_by);
        }
        Err(e) => rec.error = Some(e.to_string()),
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(algorithm: Algorithm, rho: RhoSpec) -> ExperimentConfig {
        ExperimentConfig { algorithm, n: 16, alpha_grid: vec![6.0], rho_grid: vec![rho], trials: 1, ..Default::default() }
    }

    #[test]
    fn record_fields_are_consistent() {
        let cfg = small(Algorithm::PhaseMax, RhoSpec::Cosine(0.9));
        let rec = run_trial(&cfg, TrialIndex { alpha_index: 0, rho_index: 0, trial: 0 });
        assert!(rec.error.is_none(), "{:?}", rec.error);
        assert_eq!(rec.m, 96);
        assert!((rec.rho_init_measured - 0.9).abs() < 1e-9);
        assert!(rec.nmse < 1e-6 && rec.converged);
        assert!((rec.s - 1.0).abs() < 1e-3 && rec.r < 1e-3);
    }

    #[test]
    fn failures_are_recorded_not_raised() {
        let mut cfg = small(Algorithm::PhaseMax, RhoSpec::Cosine(0.5));
        cfg.ensemble = EnsembleKind::CodedDiffraction;
        cfg.alpha_grid = vec![2.5];
        let rec = run_trial(&cfg, TrialIndex { alpha_index: 0, rho_index: 0, trial: 0 });
        assert!(rec.error.is_some());
        assert!(!rec.converged && rec.nmse.is_nan());
    }

    #[test]
    fn every_algorithm_and_init_runs() {
        for alg in [Algorithm::PhaseMax, Algorithm::PhaseLamp, Algorithm::WPhaseLamp, Algorithm::WirtingerFlow] {
            for rho in [RhoSpec::Init(InitKind::Spectral), RhoSpec::Init(InitKind::Random)] {
                let rec = run_trial(&small(alg, rho), TrialIndex { alpha_index: 0, rho_index: 0, trial: 0 });
                assert!(rec.error.is_none(), "{alg:?} {rho:?}: {:?}", rec.error);
                assert!(rec.nmse >= 0.0 && rec.rho_init_requested.is_none());
            }
        }
    }
}
