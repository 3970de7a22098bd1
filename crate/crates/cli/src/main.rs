use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polyret::algorithms::Algorithm;
use polyret::harness::acceptance::{run_acceptance, ALL_CRITERIA};
use polyret::harness::{
    check_feasibility_geometry, export_theory, run_sweep, run_trial, summarize, write_csv, write_csv_file,
    write_jsonl_file, ExperimentConfig, RhoSpec, TrialIndex,
};
use polyret::measurement::{EnsembleKind, OmegaName};

const EXIT_USAGE: u8 = 1;
const EXIT_FAILURE: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "polyret", version, about = "Phase retrieval over magnitude polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Recover one instance and print NMSE and diagnostics.
    Solve(ExperimentArgs),
    /// Run a Monte Carlo sweep and write one CSV row per trial.
    Sweep(ExperimentArgs),
    /// Export asymptotic predictions on an (alpha, rho) grid.
    Theory(TheoryArgs),
    /// Check boundary points of a random polytope against the limit set.
    Geometry(GeometryArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
}

/// Flags mirroring `ExperimentConfig`; anything given here overrides the
/// config file.
#[derive(Args, Debug)]
struct ExperimentArgs {
    /// TOML file with `ExperimentConfig` keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    algorithm: Option<Algorithm>,
    #[arg(long)]
    ensemble: Option<EnsembleKind>,
    #[arg(long)]
    n: Option<usize>,
    /// Oversampling ratios, comma separated.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<f64>>,
    /// Cosine similarities, `spectral` or `random`, comma separated.
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<RhoSpec>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    omega: Option<OmegaName>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    max_outer: Option<usize>,
    #[arg(long)]
    eps_step: Option<f64>,
    #[arg(long)]
    wf_steps: Option<usize>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write JSON lines (with wall-clock times) here.
    #[arg(long)]
    jsonl: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self) -> polyret::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {
                $(if let Some(v) = &self.$field { cfg.$target = v.clone(); })*
            };
        }
        set!(algorithm => algorithm, ensemble => ensemble, n => n, alpha => alpha_grid, rho => rho_grid,
             trials => trials, seed => master_seed, omega => omega, max_outer => max_outer,
             eps_step => eps_step, wf_steps => wf_steps);
        if self.max_iters.is_some() {
            cfg.max_iters = self.max_iters;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct TheoryArgs {
    /// Oversampling ratios (> 2), comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<f64>,
    /// Cosine similarities; defaults to 0, 0.05, ..., 1.
    #[arg(long, value_delimiter = ',')]
    rho: Option<Vec<f64>>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GeometryArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 6.0)]
    alpha: f64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// CSV of the sampled `(s, r)` points.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Criteria to run, comma separated; all by default.
    #[arg(long, value_delimiter = ',')]
    criteria: Option<Vec<usize>>,
}

enum Failure {
    Usage(String),
    Experiment(String),
}

impl From<polyret::Error> for Failure {
    fn from(e: polyret::Error) -> Self {
        match e {
            polyret::Error::Config(_) | polyret::Error::InvalidParameter { .. } => Failure::Usage(e.to_string()),
            other => Failure::Experiment(other.to_string()),
        }
    }
}

fn solve(args: &ExperimentArgs) -> Result<(), Failure> {
    let mut cfg = args.config()?;
    cfg.trials = 1;
    let rec = run_trial(&cfg, TrialIndex { alpha_index: 0, rho_index: 0, trial: 0 });
    if let Some(e) = &rec.error {
        return Err(Failure::Experiment(e.clone()));
    }
    println!("algorithm          {}", rec.algorithm);
    println!("ensemble           {}", rec.ensemble.name());
    println!("n, m               {}, {}", rec.n, rec.m);
    println!("init               {} (measured cosine {:.6})", rec.init, rec.rho_init_measured);
    println!("nmse               {:.6e}", rec.nmse);
    println!("s, r               {:.6}, {:.6}", rec.s, rec.r);
    println!("outer iterations   {}", rec.outer_iterations);
    println!("inner iterations   {}", rec.inner_iterations);
    println!("terminated by      {:?}", rec.terminated_by.expect("set on success"));
    println!("converged          {}", rec.converged);
    println!("wall time          {:.1} ms", rec.wall_ms);
    if let Some(path) = &args.out {
        write_csv_file(std::slice::from_ref(&rec), path)?;
    }
    Ok(())
}

fn sweep(args: &ExperimentArgs) -> Result<(), Failure> {
    let cfg = args.config()?;
    let rows = run_sweep(&cfg)?;
    match &args.out {
        Some(path) => write_csv_file(&rows, path)?,
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    if let Some(path) = &args.jsonl {
        write_jsonl_file(&rows, path)?;
    }
    let mut err = std::io::stderr().lock();
    for g in summarize(&rows, cfg.success_nmse) {
        let rho = g.rho_init_requested.map(|r| format!("{r:.4}")).unwrap_or(g.init.clone());
        let _ = writeln!(
            err,
            "alpha {:.3} rho {rho}: success {}/{} mean nmse {:.4e} errors {}",
            g.alpha, g.successes, g.trials, g.mean_nmse, g.failures
        );
    }
    Ok(())
}

fn theory(args: &TheoryArgs) -> Result<(), Failure> {
    let rho = args.rho.clone().unwrap_or_else(|| (0..=20).map(|k| k as f64 * 0.05).collect());
    let rows = export_theory(&args.alpha, &rho, &args.out)?;
    eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn write_points(report: &polyret::harness::GeometryReport, path: &Path) -> polyret::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(polyret::Error::from)?;
    w.write_record(["s", "r", "excess"])?;
    for p in &report.samples {
        w.write_record([p.s, p.r, p.excess].map(polyret::harness::fmt_float))?;
    }
    w.flush()?;
    Ok(())
}

fn geometry(args: &GeometryArgs) -> Result<(), Failure> {
    let rep = check_feasibility_geometry(args.n, args.alpha, args.samples, args.eps, args.seed)?;
    println!("n {} m {} alpha {} eps {}", rep.n, rep.m, rep.alpha, rep.eps);
    println!("violations {}/{} (fraction {:.4})", rep.violations, rep.samples.len(), rep.violation_fraction);
    println!("max excess {:.6e}", rep.max_excess);
    if let Some(path) = &args.out {
        write_points(&rep, path)?;
    }
    Ok(())
}

fn selftest(args: &SelftestArgs) -> Result<(), Failure> {
    let ids = args.criteria.clone().unwrap_or_else(|| ALL_CRITERIA.to_vec());
    if let Some(bad) = ids.iter().find(|id| !ALL_CRITERIA.contains(id)) {
        return Err(Failure::Usage(format!("no acceptance criterion {bad}")));
    }
    let mut failed = 0;
    for id in ids {
        let out = &run_acceptance(&[id])[0];
        println!("{out}");
        failed += (!out.passed) as usize;
    }
    if failed > 0 {
        return Err(Failure::Experiment(format!("{failed} acceptance criteria failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let res = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep(a),
        Command::Theory(a) => theory(a),
        Command::Geometry(a) => geometry(a),
        Command::Selftest(a) => selftest(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Experiment(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}
