//! Experiment engine: Monte Carlo sweeps, theory export, geometry checks
//! and the acceptance suite.

pub mod acceptance;
mod config;
mod export;
mod geometry;
mod sweep;
mod trial;

pub use config::{ExperimentConfig, InitKind, RhoSpec, SUCCESS_NMSE};
pub use export::{export_theory, theory_rows, write_theory_csv, TheoryRow, THEORY_COLUMNS};
pub use geometry::{check_feasibility_geometry, GeometryReport, GeometrySample};
pub use sweep::{
    fmt_float, run_sweep, summarize, thread_cap, trial_indices, with_pool, write_csv, write_csv_file, write_jsonl,
    write_jsonl_file, GridSummary, CSV_COLUMNS, THREADS_ENV,
};
pub use trial::{recover, run_trial, TrialIndex, TrialRecord};
