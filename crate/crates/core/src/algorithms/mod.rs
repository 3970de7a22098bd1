//! Recovery algorithms: PhaseMax, PhaseLamp, Weighted PhaseLamp and a
//! Wirtinger Flow baseline.

mod lamp;
mod weighted;
mod wirtinger;

use serde::{Deserialize, Serialize};

use crate::solver::{SolveReport, SolverOptions};

pub use lamp::{phasemax, phaselamp, phaselamp_with};
pub use weighted::{split_weighted_matrix, weighted_matrix, wphaselamp, WeightedSplit};
pub use wirtinger::{wirtinger_flow, wirtinger_gradient, wirtinger_loss, wirtinger_step_size};

/// Outer iteration cap used in the PhaseLamp experiments.
pub const DEFAULT_MAX_OUTER: usize = 25;
/// Outer step tolerance used in the PhaseLamp experiments.
pub const DEFAULT_EPS_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "phasemax", alias = "phase_max")]
    PhaseMax,
    #[serde(rename = "phaselamp", alias = "phase_lamp")]
    PhaseLamp,
    #[serde(rename = "wphaselamp", alias = "w_phase_lamp")]
    WPhaseLamp,
    #[serde(rename = "wirtinger_flow", alias = "wirtingerflow", alias = "wf")]
    WirtingerFlow,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PhaseMax => "phasemax",
            Algorithm::PhaseLamp => "phaselamp",
            Algorithm::WPhaseLamp => "wphaselamp",
            Algorithm::WirtingerFlow => "wirtinger_flow",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "phasemax" => Ok(Algorithm::PhaseMax),
            "phaselamp" => Ok(Algorithm::PhaseLamp),
            "wphaselamp" | "weightedphaselamp" => Ok(Algorithm::WPhaseLamp),
            "wirtingerflow" | "wf" => Ok(Algorithm::WirtingerFlow),
            other => Err(crate::error::invalid("algorithm", format!("unknown algorithm `{other}`"))),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxIters,
    StepTolerance,
    /// The last inner solve did not certify its tolerances.
    SolverFailure,
    /// The linearization direction vanished (`x_k = 0`).
    ZeroDirection,
}

#[derive(Clone, Debug)]
pub struct RecoveryResult<T> {
    pub x_hat: Vec<T>,
    pub outer_iterations: usize,
    /// `||x_k||^2` after each outer iteration.
    pub norm_trace: Vec<f64>,
    pub inner_reports: Vec<SolveReport<T>>,
    pub terminated_by: Termination,
    /// Wirtinger Flow loss after each step; empty for polytope methods.
    pub loss_trace: Vec<f64>,
}

impl<T> RecoveryResult<T> {
    /// Every inner solve met its tolerances.
    pub fn solves_converged(&self) -> bool {
        self.inner_reports.iter().all(|r| r.converged)
    }
}

/// Outer-loop settings shared by PhaseLamp and Weighted PhaseLamp.
#[derive(Clone, Debug)]
pub struct LampOptions<T> {
    pub max_outer: usize,
    pub eps_step: f64,
    pub solver: SolverOptions<T>,
}

impl<T> Default for LampOptions<T> {
    fn default() -> Self {
        Self {
            max_outer: DEFAULT_MAX_OUTER,
            eps_step: DEFAULT_EPS_STEP,
            solver: SolverOptions::default(),
        }
    }
}
