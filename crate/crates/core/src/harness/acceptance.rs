//! The eleven acceptance criteria, each at desk scale with fixed seeds.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, Termination};
use crate::error::Result;
use crate::measurement::{make_ensemble, make_init, measure_with, random_init, random_signal, EnsembleKind};
use crate::operator::DenseMatrix;
use crate::oracle::vertex_oracle;
use crate::rng::{self, derive_seed, tag};
use crate::scalar::{self, Scalar};
use crate::solver::{solve, PolytopeProblem, SolverOptions};
use crate::theory::{
    c_d, c_d_mc, c_star, c_star_equation, c_star_sufficient, predict_nmse, r_max, rho_c, rho_s_independent,
    theta_star, theta_star_equation, AlphaContext,
};

use super::config::{ExperimentConfig, InitKind, RhoSpec};
use super::geometry::check_feasibility_geometry;
use super::sweep::{run_sweep, summarize, with_pool};
use super::trial::recover;

pub const ACCEPTANCE_SEED: u64 = 20_170_901;
pub const ALL_CRITERIA: [usize; 11] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget_seconds: Option<f64>,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] criterion {:>2}: {} ({:.1} s) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.detail
        )
    }
}

pub fn criterion_title(id: usize) -> &'static str {
    match id {
        1 => "c_d closed form vs Monte Carlo",
        2 => "PhaseMax transition formula",
        3 => "empirical PhaseMax transition",
        4 => "asymptotic NMSE and s* at finite n",
        5 => "PhaseLamp vs PhaseMax separation",
        6 => "PhaseLamp monotonicity and fixed points",
        7 => "boundary ordering and fixed-point residuals",
        8 => "Weighted PhaseLamp advantage",
        9 => "first-order solver vs vertex oracle",
        10 => "feasibility geometry and boundary slope",
        11 => "complex Gaussian and coded diffraction",
        _ => "unknown criterion",
    }
}

fn budget(id: usize) -> Option<f64> {
    match id {
        1 => Some(30.0),
        3 | 11 => Some(300.0),
        4 | 5 => Some(600.0),
        8 => Some(900.0),
        _ => None,
    }
}

/// Runs one criterion. Errors count as failures.
pub fn run_criterion(id: usize) -> CriterionOutcome {
    let start = Instant::now();
    let res = match id {
        1 => closed_form_oracle(),
        2 => transition_formula(),
        3 => empirical_transition(),
        4 => nmse_prediction(),
        5 => lamp_separation(),
        6 => lamp_monotonicity(),
        7 => boundary_ordering(),
        8 => weighted_advantage(),
        9 => solver_oracle(),
        10 => geometry(),
        11 => complex_paths(),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let seconds = start.elapsed().as_secs_f64();
    let budget_seconds = budget(id);
    let (mut passed, mut detail) = res.unwrap_or_else(|e| (false, format!("error: {e}")));
    if let Some(b) = budget_seconds {
        if seconds > b {
            passed = false;
            detail.push_str(&format!("; over the {b:.0} s budget"));
        }
    }
    CriterionOutcome { id, title: criterion_title(id).into(), passed, detail, seconds, budget_seconds }
}

pub fn run_acceptance(ids: &[usize]) -> Vec<CriterionOutcome> {
    ids.iter().map(|&id| run_criterion(id)).collect()
}

type Check = Result<(bool, String)>;

fn sweep_cfg(algorithm: Algorithm, n: usize, alpha: f64, rho: RhoSpec, trials: usize, salt: u64) -> ExperimentConfig {
    ExperimentConfig {
        algorithm,
        n,
        alpha_grid: vec![alpha],
        rho_grid: vec![rho],
        trials,
        master_seed: derive_seed(ACCEPTANCE_SEED, &[salt]),
        ..Default::default()
    }
}

fn nmse_values(cfg: &ExperimentConfig) -> Result<Vec<f64>> {
    Ok(run_sweep(cfg)?.into_iter().map(|r| r.nmse).collect())
}

fn count(v: &[f64], pred: impl Fn(f64) -> bool) -> usize {
    v.iter().filter(|&&x| pred(x)).count()
}

fn closed_form_oracle() -> Check {
    let s_grid = [-0.9, -0.45, 0.0, 0.45, 0.9];
    let r_grid = [0.05, 0.5, 1.0, 1.5, 3.0];
    let points: Vec<(f64, f64)> = s_grid.iter().flat_map(|&s| r_grid.iter().map(move |&r| (s, r))).collect();
    let results: Vec<Result<(f64, f64, f64)>> = with_pool(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(k, &(s, r))| {
                let (est, se) = c_d_mc(s, r, 1_000_000, derive_seed(ACCEPTANCE_SEED, &[1, k as u64]))?;
                Ok(((c_d(s, r) - est).abs(), se, s))
            })
            .collect()
    })?;
    let mut worst: f64 = 0.0;
    let mut bad = 0;
    for res in results {
        let (err, se, _) = res?;
        worst = worst.max(err / se);
        if err > 3.0 * se {
            bad += 1;
        }
    }
    let exact = (c_d(0.0, 1.0) - (1.0 - 2.0 / std::f64::consts::PI)).abs();
    Ok((
        bad == 0 && exact <= 1e-12,
        format!("{bad}/25 points beyond 3 stderr (worst {worst:.2} stderr); |c_d(0,1) - (1 - 2/pi)| = {exact:.1e}"),
    ))
}

fn transition_formula() -> Check {
    let (r3, r5) = (rho_c(3.0)?, rho_c(5.0)?);
    Ok((
        (0.625..=0.632).contains(&r3) && (0.365..=0.370).contains(&r5),
        format!("rho_c(3) = {r3:.5}, rho_c(5) = {r5:.5}"),
    ))
}

fn empirical_transition() -> Check {
    let rc = rho_c(4.0)?;
    let above = nmse_values(&sweep_cfg(Algorithm::PhaseMax, 400, 4.0, RhoSpec::Cosine(rc + 0.08), 10, 31))?;
    let below = nmse_values(&sweep_cfg(Algorithm::PhaseMax, 400, 4.0, RhoSpec::Cosine(rc - 0.08), 10, 32))?;
    let (hi, lo) = (count(&above, |e| e < 1e-4), count(&below, |e| e < 1e-4));
    Ok((hi >= 8 && lo <= 2, format!("success {hi}/10 at rho_c+0.08, {lo}/10 at rho_c-0.08 (rho_c(4) = {rc:.4})")))
}

fn nmse_prediction() -> Check {
    let pred = predict_nmse(&AlphaContext::new(3.0)?, 0.4)?;
    let rows = run_sweep(&sweep_cfg(Algorithm::PhaseMax, 1000, 3.0, RhoSpec::Cosine(0.4), 10, 4))?;
    if let Some(r) = rows.iter().find(|r| r.error.is_some()) {
        return Ok((false, format!("trial failed: {}", r.error.as_deref().unwrap_or(""))));
    }
    let sum = &summarize(&rows, 1e-4)[0];
    let (dn, ds) = ((sum.mean_nmse - pred.nmse_pred).abs(), (sum.mean_s - pred.s_star).abs());
    Ok((
        dn <= 0.05 && ds <= 0.03,
        format!(
            "mean NMSE {:.4} vs {:.4} (diff {dn:.4}); mean s {:.4} vs {:.4} (diff {ds:.4})",
            sum.mean_nmse, pred.nmse_pred, sum.mean_s, pred.s_star
        ),
    ))
}

fn lamp_separation() -> Check {
    let lamp4 = nmse_values(&sweep_cfg(Algorithm::PhaseLamp, 400, 4.0, RhoSpec::Cosine(0.1), 5, 51))?;
    let max4 = nmse_values(&sweep_cfg(Algorithm::PhaseMax, 400, 4.0, RhoSpec::Cosine(0.1), 5, 51))?;
    let lamp3 = nmse_values(&sweep_cfg(Algorithm::PhaseLamp, 400, 3.0, RhoSpec::Cosine(0.1), 5, 53))?;
    let (a, b, c) = (count(&lamp4, |e| e < 1e-4), count(&max4, |e| e > 0.01), count(&lamp3, |e| e > 0.01));
    Ok((
        a >= 4 && b >= 4 && c >= 4,
        format!("alpha 4: PhaseLamp recovers {a}/5, PhaseMax fails {b}/5; alpha 3: PhaseLamp fails {c}/5"),
    ))
}

/// Outcome of one monotonicity instance: worst decrease of the norm trace
/// and, at a fixed point, `||x||^2 - |x_1|`.
fn monotone_instance(k: usize) -> Result<(f64, Option<f64>)> {
    let n = 64;
    let alpha = [3.0, 4.0, 5.0, 6.0, 8.0][k % 5];
    let seed = derive_seed(ACCEPTANCE_SEED, &[6, k as u64]);
    let ensemble = make_ensemble(EnsembleKind::GaussianReal, n, alpha, derive_seed(seed, &[tag::ENSEMBLE]))?;
    let a = ensemble.real().expect("real ensemble");
    let xi: Vec<f64> = random_signal(n, derive_seed(seed, &[tag::SIGNAL]));
    let y = measure_with(a, &xi)?;
    let init_seed = derive_seed(seed, &[tag::INIT]);
    let x0 = match k % 10 {
        0..=4 => random_init(n, init_seed).x,
        j => make_init(&xi, 0.1 * (j - 4) as f64, init_seed)?.x,
    };
    let cfg = ExperimentConfig { algorithm: Algorithm::PhaseLamp, max_outer: 200, eps_step: 1e-7, ..Default::default() };
    let res = recover(&cfg, a, &y, &x0)?;
    let drop = res.norm_trace.windows(2).map(|w| w[0] - w[1]).fold(f64::NEG_INFINITY, f64::max);
    let fixed = (res.terminated_by == Termination::StepTolerance)
        .then(|| scalar::norm_sqr(&res.x_hat) - scalar::dot(&res.x_hat, &xi).abs());
    Ok((drop, fixed))
}

fn lamp_monotonicity() -> Check {
    let results: Vec<Result<(f64, Option<f64>)>> = with_pool(|| (0..50).into_par_iter().map(monotone_instance).collect())?;
    let mut worst_drop = f64::NEG_INFINITY;
    let mut worst_margin = f64::INFINITY;
    let mut fixed = 0;
    for res in results {
        let (drop, margin) = res?;
        worst_drop = worst_drop.max(drop);
        if let Some(m) = margin {
            fixed += 1;
            worst_margin = worst_margin.min(m);
        }
    }
    Ok((
        worst_drop <= 1e-9 && fixed > 0 && worst_margin >= -1e-6,
        format!(
            "largest norm decrease {worst_drop:.2e}; {fixed}/50 reached a fixed point, min ||x||^2 - |x_1| = {worst_margin:.3e}"
        ),
    ))
}

fn boundary_ordering() -> Check {
    let mut ok = true;
    let mut worst_res: f64 = 0.0;
    let mut notes = Vec::new();
    for alpha in [2.5, 3.0, 4.0, 5.0, 7.0, 10.0] {
        let (rs, rc) = (rho_s_independent(alpha)?, rho_c(alpha)?);
        let (c, theta) = (c_star(alpha)?, theta_star(alpha)?);
        let suff = c_star_sufficient(alpha)?;
        let residual = c_star_equation(alpha, c).abs().max(theta_star_equation(alpha, theta).abs());
        worst_res = worst_res.max(residual);
        let good = rs <= theta.sin() && rc <= suff && rs < rc;
        if !good {
            notes.push(format!("alpha {alpha}: rho_s {rs:.4}, sin theta* {:.4}, rho_c {rc:.4}, c* bound {suff:.4}", theta.sin()));
        }
        ok &= good;
    }
    ok &= worst_res <= 1e-10;
    let mut detail = format!("orderings hold on 6 ratios, max fixed-point residual {worst_res:.1e}");
    if !notes.is_empty() {
        detail = notes.join("; ");
    }
    Ok((ok, detail))
}

fn weighted_advantage() -> Check {
    let rho = RhoSpec::Init(InitKind::Random);
    let w = nmse_values(&sweep_cfg(Algorithm::WPhaseLamp, 200, 3.5, rho, 15, 8))?;
    let p = nmse_values(&sweep_cfg(Algorithm::PhaseLamp, 200, 3.5, rho, 15, 8))?;
    let (ws, ps) = (count(&w, |e| e < 1e-4), count(&p, |e| e < 1e-4));
    Ok((ws > ps, format!("success WPhaseLamp {ws}/15, PhaseLamp {ps}/15")))
}

/// Iteration cap for the tiny oracle instances; `50 n` is far too small
/// when `n <= 3` and the polytope is badly conditioned.
pub const ORACLE_MAX_ITERS: usize = 100_000;

fn oracle_instance(t: u64) -> Result<Option<(f64, bool, Option<f64>)>> {
    let mut g = rng::stream(derive_seed(ACCEPTANCE_SEED, &[9, t]));
    let n = 1 + (t % 3) as usize;
    let m = n + (t as usize / 3) % (9 - n);
    let a = DenseMatrix::from_row_major(m, n, (0..m * n).map(|_| f64::sample_normal(&mut g)).collect());
    let xi: Vec<f64> = (0..n).map(|_| f64::sample_normal(&mut g)).collect();
    let c: Vec<f64> = (0..n).map(|_| f64::sample_normal(&mut g)).collect();
    let y = measure_with(&a, &xi)?;
    let Some(best) = vertex_oracle(&a, y.as_slice(), &c)? else { return Ok(None) };
    let opts = SolverOptions { max_iters: Some(ORACLE_MAX_ITERS), ..Default::default() };
    let rep = solve(&PolytopeProblem::linear(&a, &y, c), &opts)?;
    Ok(Some(((rep.objective_value - best.value).abs(), rep.converged, rep.duality_gap)))
}

fn solver_oracle() -> Check {
    let results: Vec<Result<Option<(f64, bool, Option<f64>)>>> =
        with_pool(|| (0..500u64).into_par_iter().map(oracle_instance).collect())?;
    let (mut bounded, mut matched, mut converged, mut gap_bad) = (0, 0, 0, 0);
    let mut worst_gap: f64 = 0.0;
    for res in results {
        let Some((err, conv, gap)) = res? else { continue };
        bounded += 1;
        matched += (err <= 1e-6) as usize;
        if conv {
            converged += 1;
            let g = gap.unwrap_or(f64::INFINITY);
            worst_gap = worst_gap.max(g);
            gap_bad += (g > 1e-8) as usize;
        }
    }
    Ok((
        bounded > 0 && matched * 100 >= 99 * bounded && gap_bad == 0,
        format!(
            "{matched}/{bounded} bounded instances within 1e-6; {converged} converged, {gap_bad} with gap > 1e-8 (max {worst_gap:.1e}); {} unbounded skipped",
            500 - bounded
        ),
    ))
}

/// Step used for the one-sided slope of `r_max` at `s = 1`; the
/// finite-difference error is `O(h)`.
pub const SLOPE_STEP: f64 = 1e-5;

fn geometry() -> Check {
    let rep = check_feasibility_geometry(1000, 6.0, 200, 0.05, derive_seed(ACCEPTANCE_SEED, &[10]))?;
    let mut ok = rep.violation_fraction <= 0.01;
    let mut detail = format!("violation fraction {:.3} (max excess {:.3e})", rep.violation_fraction, rep.max_excess);
    for alpha in [4.0, 7.0] {
        let slope = (r_max(alpha, 1.0 - SLOPE_STEP)? - r_max(alpha, 1.0)?) / SLOPE_STEP;
        let c = c_star(alpha)?;
        ok &= (slope - c).abs() <= 1e-3;
        detail.push_str(&format!("; alpha {alpha}: slope {slope:.5} vs c* {c:.5}"));
    }
    Ok((ok, detail))
}

fn complex_paths() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for (salt, kind) in [(111, EnsembleKind::GaussianComplex), (112, EnsembleKind::CodedDiffraction)] {
        let cfg = ExperimentConfig {
            ensemble: kind,
            ..sweep_cfg(Algorithm::PhaseLamp, 128, 6.0, RhoSpec::Init(InitKind::Spectral), 10, salt)
        };
        let e = nmse_values(&cfg)?;
        let good = count(&e, |v| v < 1e-3);
        ok &= good >= 8;
        parts.push(format!("{}: {good}/10 below 1e-3", kind.name()));
    }
    Ok((ok, parts.join("; ")))
}
