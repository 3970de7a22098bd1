use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::theory::{
    c_star_sufficient, predict_nmse, prior_sufficient_alpha, rho_c, rho_hat_s, rho_s_independent, AlphaContext,
};

use super::sweep::fmt_float;

pub const THEORY_COLUMNS: [&str; 10] = [
    "alpha",
    "rho",
    "s_star",
    "r_star",
    "nmse_pred",
    "rho_c",
    "rho_hat_s",
    "rho_s_indep",
    "c_star_suff",
    "prior_bound",
];

/// Asymptotic predictions at one `(alpha, rho)` point. `prior_bound` is the
/// oversampling ratio the earlier sufficient condition asks for at `rho`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoryRow {
    pub alpha: f64,
    pub rho: f64,
    pub s_star: f64,
    pub r_star: f64,
    pub nmse_pred: f64,
    pub rho_c: f64,
    pub rho_hat_s: f64,
    pub rho_s_indep: f64,
    pub c_star_suff: f64,
    pub prior_bound: f64,
}

pub fn theory_rows(alpha_grid: &[f64], rho_grid: &[f64]) -> Result<Vec<TheoryRow>> {
    if alpha_grid.is_empty() || rho_grid.is_empty() {
        return Err(invalid("grid", "alpha and rho grids must be nonempty"));
    }
    let mut rows = Vec::with_capacity(alpha_grid.len() * rho_grid.len());
    for &alpha in alpha_grid {
        let ctx = AlphaContext::new(alpha)?;
        let boundaries = (rho_c(alpha)?, rho_hat_s(alpha)?, rho_s_independent(alpha)?, c_star_sufficient(alpha)?);
        for &rho in rho_grid {
            let p = predict_nmse(&ctx, rho)?;
            rows.push(TheoryRow {
                alpha,
                rho,
                s_star: p.s_star,
                r_star: p.r_star,
                nmse_pred: p.nmse_pred,
                rho_c: boundaries.0,
                rho_hat_s: boundaries.1,
                rho_s_indep: boundaries.2,
                c_star_suff: boundaries.3,
                prior_bound: prior_sufficient_alpha(rho)?,
            });
        }
    }
    Ok(rows)
}

pub fn write_theory_csv<W: Write>(rows: &[TheoryRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(THEORY_COLUMNS)?;
    for r in rows {
        let vals = [
            r.alpha,
            r.rho,
            r.s_star,
            r.r_star,
            r.nmse_pred,
            r.rho_c,
            r.rho_hat_s,
            r.rho_s_indep,
            r.c_star_suff,
            r.prior_bound,
        ];
        w.write_record(vals.iter().map(|&v| fmt_float(v)))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the theory table for the grid to `path`.
pub fn export_theory(alpha_grid: &[f64], rho_grid: &[f64], path: &Path) -> Result<Vec<TheoryRow>> {
    let rows = theory_rows(alpha_grid, rho_grid)?;
    write_theory_csv(&rows, std::fs::File::create(path)?)?;
    Ok(rows)
}
