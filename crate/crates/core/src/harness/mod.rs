//! The ε sweep: configuration, the registry of exterior problems, sup-norm
//! measurements, rate fits, reports and the verification suite behind `verify`.

mod config;
mod fit;
mod report;
mod strategy;
mod sweep;
mod verify;

pub use config::{SweepConfig, DEFAULT_EPS_LIST, DEFAULT_TIME_SAMPLES};
pub use fit::{fit_rate, two_point_rates};
pub use report::{ConvergenceReport, ReportMetadata, CSV_HEADER, RATE_NOTE};
pub use strategy::{
    cauchy_boundary_constants, DirichletProblem, ExteriorCase, ExteriorProblem, NeumannProblem,
    ProblemRegistry,
};
pub use sweep::{
    run_sweep, run_sweep_with, time_grid, GrowthConstants, RowMetrics, SweepOptions, SweepRow,
    BOUNDARY_SAMPLES,
};
pub use verify::{
    boundary_constant_table, decays_by, error_ratios, fd_wave_residual, off_seam_points,
    oracle_errors, run_verify, variation_factor, CheckResult, VerifyOptions, VerifySummary,
    ORACLE_GRIDS, VERIFY_EPS,
};
