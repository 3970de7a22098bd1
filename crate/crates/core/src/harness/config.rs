use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algorithms::{Algorithm, DEFAULT_EPS_STEP, DEFAULT_MAX_OUTER};
use crate::error::{Error, Result};
use crate::measurement::{EnsembleKind, OmegaName};
use crate::solver::{DEFAULT_TOL_FEAS, DEFAULT_TOL_STAT};

/// How the initial guess of a trial is produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    /// Leading eigenvector of the weighted matrix built with `omega`.
    Spectral,
    /// Gaussian direction independent of everything else.
    Random,
}

/// One entry of the initialization grid: a target cosine similarity or a
/// named construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RhoSpec {
    Cosine(f64),
    Init(InitKind),
}

impl RhoSpec {
    pub fn requested(&self) -> Option<f64> {
        match self {
            RhoSpec::Cosine(r) => Some(*r),
            RhoSpec::Init(_) => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            RhoSpec::Cosine(_) => "cosine".into(),
            RhoSpec::Init(InitKind::Spectral) => "spectral".into(),
            RhoSpec::Init(InitKind::Random) => "random".into(),
        }
    }
}

impl std::str::FromStr for RhoSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "spectral" => Ok(RhoSpec::Init(InitKind::Spectral)),
            "random" => Ok(RhoSpec::Init(InitKind::Random)),
            other => other
                .parse::<f64>()
                .map(RhoSpec::Cosine)
                .map_err(|_| Error::Config(format!("rho entry `{s}` is neither a number, `spectral` nor `random`"))),
        }
    }
}

/// Sweep description; every field has a default so config files only list
/// what they change.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub ensemble: EnsembleKind,
    pub n: usize,
    pub alpha_grid: Vec<f64>,
    pub rho_grid: Vec<RhoSpec>,
    pub trials: usize,
    pub master_seed: u64,
    pub tol_feas: f64,
    pub tol_stat: f64,
    /// Inner solver iteration cap; `None` means `50 n`.
    pub max_iters: Option<usize>,
    pub max_outer: usize,
    pub eps_step: f64,
    pub omega: OmegaName,
    /// Power iterations for spectral initialization.
    pub spectral_iters: usize,
    pub wf_steps: usize,
    pub wf_step_size: Option<f64>,
    /// NMSE below which a trial counts as exact recovery.
    pub success_nmse: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::PhaseMax,
            ensemble: EnsembleKind::GaussianReal,
            n: 100,
            alpha_grid: vec![4.0],
            rho_grid: vec![RhoSpec::Cosine(0.5)],
            trials: 10,
            master_seed: 1,
            tol_feas: DEFAULT_TOL_FEAS,
            tol_stat: DEFAULT_TOL_STAT,
            max_iters: None,
            max_outer: DEFAULT_MAX_OUTER,
            eps_step: DEFAULT_EPS_STEP,
            omega: OmegaName::Square,
            spectral_iters: 1000,
            wf_steps: 2000,
            wf_step_size: None,
            success_nmse: SUCCESS_NMSE,
        }
    }
}

/// Recovery threshold used to classify trials.
pub const SUCCESS_NMSE: f64 = 1e-4;

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n == 0 {
            return fail("n must be at least 1".into());
        }
        if self.alpha_grid.is_empty() || self.rho_grid.is_empty() {
            return fail("alpha_grid and rho_grid must be nonempty".into());
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if let Some(a) = self.alpha_grid.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return fail(format!("alpha values must be positive, found {a}"));
        }
        if self.ensemble == EnsembleKind::CodedDiffraction {
            if let Some(a) = self.alpha_grid.iter().find(|a| a.fract() != 0.0) {
                return fail(format!("coded diffraction needs integer alpha (pattern count), found {a}"));
            }
        }
        for r in &self.rho_grid {
            if let RhoSpec::Cosine(v) = r {
                if !(0.0..=1.0).contains(v) {
                    return fail(format!("rho values must lie in [0, 1], found {v}"));
                }
            }
        }
        for (name, v) in [("tol_feas", self.tol_feas), ("tol_stat", self.tol_stat), ("success_nmse", self.success_nmse)] {
            if !(v > 0.0 && v.is_finite()) {
                return fail(format!("{name} must be positive, found {v}"));
            }
        }
        if !(self.eps_step >= 0.0) {
            return fail(format!("eps_step must be nonnegative, found {}", self.eps_step));
        }
        if self.max_outer == 0 || self.wf_steps == 0 || self.spectral_iters == 0 {
            return fail("max_outer, wf_steps and spectral_iters must be at least 1".into());
        }
        if self.max_iters == Some(0) {
            return fail("max_iters must be at least 1".into());
        }
        if let Some(mu) = self.wf_step_size {
            if !(mu > 0.0 && mu.is_finite()) {
                return fail(format!("wf_step_size must be positive, found {mu}"));
            }
        }
        Ok(())
    }

    /// Number of trials the sweep will run.
    pub fn total_trials(&self) -> usize {
        self.alpha_grid.len() * self.rho_grid.len() * self.trials
    }
}
