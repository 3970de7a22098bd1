use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::config::ExperimentConfig;
use super::trial::{run_trial, TrialIndex, TrialRecord};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "POLYRET_THREADS";

/// Worker count from `POLYRET_THREADS`, or `None` for the rayon default.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok().filter(|&t| t > 0)
}

/// Runs `f` on a pool sized by `POLYRET_THREADS`.
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> Result<R> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = thread_cap() {
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// All trials of the sweep, in canonical `(alpha, rho, trial)` order.
pub fn trial_indices(cfg: &ExperimentConfig) -> Vec<TrialIndex> {
    let mut out = Vec::with_capacity(cfg.total_trials());
    for alpha_index in 0..cfg.alpha_grid.len() {
        for rho_index in 0..cfg.rho_grid.len() {
            for trial in 0..cfg.trials {
                out.push(TrialIndex { alpha_index, rho_index, trial });
            }
        }
    }
    out
}

/// Executes every trial of the grid. Rows come back in canonical order
/// whatever the thread count.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let jobs = trial_indices(cfg);
    let mut rows: Vec<TrialRecord> = with_pool(|| jobs.par_iter().map(|&ix| run_trial(cfg, ix)).collect())?;
    rows.sort_by_key(|r| r.index);
    Ok(rows)
}

/// Column order of the CSV output. `wall_ms` is left out so that equal
/// configurations give byte-identical files; it is kept in JSON lines.
pub const CSV_COLUMNS: [&str; 20] = [
    "algorithm",
    "ensemble",
    "alpha_index",
    "rho_index",
    "trial",
    "n",
    "m",
    "alpha",
    "init",
    "rho_init_requested",
    "rho_init_measured",
    "seed",
    "nmse",
    "s",
    "r",
    "outer_iterations",
    "inner_iterations",
    "converged",
    "terminated_by",
    "error",
];

/// 17 significant digits, enough to round-trip every `f64`.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn enum_name<S: Serialize>(v: &S) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        Ok(other) => other.to_string(),
        Err(_) => String::new(),
    }
}

fn csv_row(r: &TrialRecord) -> Vec<String> {
    vec![
        enum_name(&r.algorithm),
        enum_name(&r.ensemble),
        r.index.alpha_index.to_string(),
        r.index.rho_index.to_string(),
        r.index.trial.to_string(),
        r.n.to_string(),
        r.m.to_string(),
        fmt_float(r.alpha),
        r.init.clone(),
        r.rho_init_requested.map(fmt_float).unwrap_or_default(),
        fmt_float(r.rho_init_measured),
        r.seed.to_string(),
        fmt_float(r.nmse),
        fmt_float(r.s),
        fmt_float(r.r),
        r.outer_iterations.to_string(),
        r.inner_iterations.to_string(),
        r.converged.to_string(),
        r.terminated_by.as_ref().map(enum_name).unwrap_or_default(),
        r.error.clone().unwrap_or_default(),
    ]
}

pub fn write_csv<W: Write>(rows: &[TrialRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record(csv_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(rows: &[TrialRecord], path: &Path) -> Result<()> {
    write_csv(rows, std::fs::File::create(path)?)
}

/// One JSON object per line, including wall-clock time.
pub fn write_jsonl<W: Write>(rows: &[TrialRecord], mut out: W) -> Result<()> {
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_jsonl_file(rows: &[TrialRecord], path: &Path) -> Result<()> {
    write_jsonl(rows, std::io::BufWriter::new(std::fs::File::create(path)?))
}

/// Aggregate over the trials of one grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub alpha: f64,
    pub init: String,
    pub rho_init_requested: Option<f64>,
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub mean_nmse: f64,
    pub mean_s: f64,
    pub mean_r: f64,
}

impl GridSummary {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = v.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    if count == 0 { f64::NAN } else { sum / count as f64 }
}

/// Per-grid-point statistics, in canonical order. Errored trials count as
/// failures and are excluded from the means.
pub fn summarize(rows: &[TrialRecord], success_nmse: f64) -> Vec<GridSummary> {
    let mut out: Vec<GridSummary> = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let key = (rows[start].index.alpha_index, rows[start].index.rho_index);
        let end = start
            + rows[start..]
                .iter()
                .take_while(|r| (r.index.alpha_index, r.index.rho_index) == key)
                .count();
        let group = &rows[start..end];
        let ok = || group.iter().filter(|r| r.error.is_none());
        out.push(GridSummary {
            alpha: group[0].alpha,
            init: group[0].init.clone(),
            rho_init_requested: group[0].rho_init_requested,
            trials: group.len(),
            successes: group.iter().filter(|r| r.succeeded(success_nmse)).count(),
            failures: group.iter().filter(|r| r.error.is_some()).count(),
            mean_nmse: mean(ok().map(|r| r.nmse)),
            mean_s: mean(ok().map(|r| r.s)),
            mean_r: mean(ok().map(|r| r.r)),
        });
        start = end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::Algorithm;
    use crate::harness::config::RhoSpec;

    fn cfg() -> ExperimentConfig {
        ExperimentConfig {
            algorithm: Algorithm::PhaseMax,
            n: 12,
            alpha_grid: vec![5.0, 7.0],
            rho_grid: vec![RhoSpec::Cosine(0.2), RhoSpec::Cosine(0.95)],
            trials: 3,
            master_seed: 9,
            ..Default::default()
        }
    }

    #[test]
    fn sweep_order_and_csv_are_deterministic() {
        let rows = run_sweep(&cfg()).unwrap();
        assert_eq!(rows.len(), 12);
        assert!(rows.windows(2).all(|w| w[0].index < w[1].index));
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&rows, &mut a).unwrap();
        write_csv(&run_sweep(&cfg()).unwrap(), &mut b).unwrap();
        assert_eq!(a, b);
        let text = String::from_utf8(a).unwrap();
        assert_eq!(text.lines().count(), 13);
        assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
    }

    #[test]
    fn floats_round_trip_through_csv_format() {
        for v in [0.1, 1.0 / 3.0, 6.02e23, -2.5e-300, f64::MIN_POSITIVE] {
            assert_eq!(fmt_float(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_float(f64::NAN), "NaN");
    }

    #[test]
    fn summary_groups_grid_points() {
        let rows = run_sweep(&cfg()).unwrap();
        let sum = summarize(&rows, 1e-4);
        assert_eq!(sum.len(), 4);
        assert!(sum.iter().all(|g| g.trials == 3 && g.failures == 0));
        // high-quality initialization recovers at alpha = 7
        assert_eq!(sum[3].successes, 3);
        let mut buf = Vec::new();
        write_jsonl(&rows, &mut buf).unwrap();
        let back: TrialRecord = serde_json::from_str(String::from_utf8(buf).unwrap().lines().next().unwrap()).unwrap();
        assert_eq!(back.index, rows[0].index);
    }
}
