use std::collections::BTreeMap;
use std::time::Instant;

use log::{debug, info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_form::{cauchy_solution, BoundaryKind, CauchySolution};
use crate::energy::{diff_breakdown, sobolev_distance, EnergyBreakdown, IdentityCheck};
use crate::error::Result;
use crate::radial_data::RadialProfile;

use super::config::SweepConfig;
use super::fit::fit_rate;
use super::report::{ConvergenceReport, ReportMetadata};
use super::strategy::{cauchy_boundary_constants, ExteriorProblem, ProblemRegistry};

/// Uniform time samples used for the sups of the boundary quantities.
pub const BOUNDARY_SAMPLES: usize = 513;

/// Width, relative to `T`, at which the golden-section refinement of the sup stops.
const REFINE_TOL: f64 = 1e-4;

/// Growth of the difference energies over `[0, T]`, scaled by the powers of ε
/// in the one-sided bounds `𝓔^ε(T) - 𝓔^ε(0) ≲ ε^{1/2}` and `𝔼^ε(T) - 𝔼^ε(0) ≲ ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthConstants {
    pub first: f64,
    pub second: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowMetrics {
    pub sobolev_order: u32,
    /// `max_t ‖U(t) - Ũ^ε(t)‖` over the grid and the refinement.
    pub sup_norm: f64,
    pub argmax_t: f64,
    /// `(t, norm)` on the uniform grid.
    pub samples: Vec<(f64, f64)>,
    pub at_max: EnergyBreakdown,
    pub initial: EnergyBreakdown,
    #[serde(rename = "final")]
    pub final_: EnergyBreakdown,
    pub identity1: IdentityCheck,
    pub identity2: Option<IdentityCheck>,
    pub growth: GrowthConstants,
    pub boundary_constants: BTreeMap<String, f64>,
}

/// One ε of a sweep. `metrics` is absent when the row failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub metrics: Option<RowMetrics>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy)]
pub struct SweepOptions {
    /// Run ε rows and time samples on the rayon pool.
    pub parallel: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { parallel: true }
    }
}

/// `n` uniform samples of `[0, t_max]`, both ends included.
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { t_max } else { t_max * i as f64 / last }).collect()
}

/// Golden-section search for a maximum of `f` on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, tol: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            (x1, f1) = (x2, f2);
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            (x2, f2) = (x1, f1);
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

fn map_maybe_par<T, R>(items: &[T], parallel: bool, f: impl Fn(&T) -> R + Sync + Send) -> Vec<R>
where
    T: Sync,
    R: Send,
{
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

struct SweepContext<'a> {
    sc: &'a SweepConfig,
    problem: &'a dyn ExteriorProblem,
    u: CauchySolution,
    phi: RadialProfile,
    psi: RadialProfile,
    parallel: bool,
}

impl SweepContext<'_> {
    fn row(&self, eps: f64) -> Result<RowMetrics> {
        let sc = self.sc;
        let tol = sc.tolerances;
        let kind = self.problem.kind();
        let order = self.problem.sobolev_order();
        let case = self.problem.build(&self.phi, &self.psi, sc.wave(), eps)?;
        let u = &self.u;
        let ext = &case.extended;
        let norm = |t: f64| sobolev_distance(u, ext, kind, t, order, tol);

        let grid = time_grid(sc.t_max, sc.time_samples);
        let values = map_maybe_par(&grid, self.parallel, |&t| norm(t));
        let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
        let samples: Vec<(f64, f64)> = grid.iter().copied().zip(values.iter().copied()).collect();

        // first maximizer, so ties resolve the same way every run
        let imax = (0..values.len()).fold(0, |best, i| if values[i] > values[best] { i } else { best });
        let lo = grid[imax.saturating_sub(1)];
        let hi = grid[(imax + 1).min(grid.len() - 1)];
        let (t_ref, v_ref) = golden_max(norm, lo, hi, REFINE_TOL * sc.t_max)?;
        let (argmax_t, sup_norm) = if v_ref > values[imax] {
            (t_ref, v_ref)
        } else {
            (grid[imax], values[imax])
        };
        debug!("eps={eps}: sup {sup_norm} at t={argmax_t}");

        let breakdown = |t: f64| diff_breakdown(u, ext, kind, t, tol);
        let at_max = breakdown(argmax_t)?;
        let initial = breakdown(0.0)?;
        let final_ = breakdown(sc.t_max)?;
        let (identity1, identity2) =
            self.problem.identities(u, &case, sc.t_max, &sc.features(), tol)?;

        let growth = GrowthConstants {
            first: (final_.e_eps - initial.e_eps) / eps.sqrt(),
            second: match (final_.ee_eps, initial.ee_eps) {
                (Some(b), Some(a)) => Some((b - a) / eps),
                _ => None,
            },
        };

        let times = time_grid(sc.t_max, BOUNDARY_SAMPLES);
        let mut boundary_constants = self.problem.boundary_constants(&case, &times)?;
        boundary_constants.extend(cauchy_boundary_constants(u, eps, &times)?);

        Ok(RowMetrics {
            sobolev_order: order,
            sup_norm,
            argmax_t,
            samples,
            at_max,
            initial,
            final_,
            identity1,
            identity2,
            growth,
            boundary_constants,
        })
    }
}

/// Runs the sweep for the problem named by `kind`, built with the configured cutoff.
pub fn run_sweep(sc: &SweepConfig, kind: BoundaryKind) -> Result<ConvergenceReport> {
    let problem = ProblemRegistry::with_cutoff(&sc.cutoff)?.for_kind(kind)?;
    run_sweep_with(sc, problem.as_ref(), SweepOptions::default())
}

/// Measures `sup_t ‖U(t) - Ũ^ε(t)‖` for every ε of the configuration.
///
/// A failing ε produces a row with an error and marks the report partial;
/// only an invalid configuration is an `Err`.
pub fn run_sweep_with(
    sc: &SweepConfig,
    problem: &dyn ExteriorProblem,
    opts: SweepOptions,
) -> Result<ConvergenceReport> {
    sc.validate()?;
    let start = Instant::now();
    let (phi, psi) = sc.profiles()?;
    let ctx = SweepContext {
        sc,
        problem,
        u: cauchy_solution(&phi, &psi, sc.wave())?,
        phi,
        psi,
        parallel: opts.parallel,
    };
    info!("{} sweep over eps = {:?}", problem.kind(), sc.eps_list);
    let rows: Vec<SweepRow> = map_maybe_par(&sc.eps_list, opts.parallel, |&eps| match ctx.row(eps) {
        Ok(m) => SweepRow {
            eps,
            metrics: Some(m),
            error: None,
        },
        Err(e) => {
            warn!("eps={eps} failed: {e}");
            SweepRow {
                eps,
                metrics: None,
                error: Some(e.to_string()),
            }
        }
    });

    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.metrics.as_ref().map(|m| (r.eps, m.sup_norm)))
        .collect();
    let partial = rows.iter().any(|r| r.error.is_some());
    Ok(ConvergenceReport {
        boundary: problem.kind(),
        fitted_rate: fit_rate(&points),
        partial,
        rows,
        metadata: ReportMetadata::new(sc.clone(), start.elapsed().as_secs_f64()),
    })
}
