use std::fmt;

use log::info;
use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{
    cauchy_solution, q_functional, BoundaryKind, Evaluator, SolutionEvaluator, WaveConfig,
};
use crate::energy::{diff_breakdown, energy_first, energy_second};
use crate::error::Result;
use crate::fd_oracle::{cfl_step, sample_u, solve_1d, FdBoundary};
use crate::quadrature::{QuadratureRequest, Tolerance};
use crate::radial_data::RadialProfile;

use super::config::SweepConfig;
use super::strategy::{cauchy_boundary_constants, sup_abs, ExteriorCase, ProblemRegistry};
use super::sweep::{time_grid, BOUNDARY_SAMPLES};

/// The ε values of the fixed-ε checks.
pub const VERIFY_EPS: [f64; 2] = [0.1, 0.05];

/// Grid spacings of the finite-difference cross-check, halving.
pub const ORACLE_GRIDS: [f64; 3] = [2e-3, 1e-3, 5e-4];

/// Below this every compared quantity counts as zero.
const ZERO: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub config: SweepConfig,
    /// Sign in the Robin condition `u_r = sign·u/ε` tested against the Neumann solution.
    /// Anything but `1` must make the compatibility check fail.
    pub robin_sign: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            config: SweepConfig::default(),
            robin_sign: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self::new(name, value <= limit, format!("{value:.3e} (limit {limit:.1e})"))
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerifySummary {
    pub checks: Vec<CheckResult>,
}

impl VerifySummary {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Setup {
    cfg: WaveConfig,
    tol: Tolerance,
    phi: RadialProfile,
    psi: RadialProfile,
    u: Evaluator,
    registry: ProblemRegistry,
    features: [f64; 2],
}

impl Setup {
    fn case(&self, kind: BoundaryKind, eps: f64) -> Result<ExteriorCase> {
        self.registry.for_kind(kind)?.build(&self.phi, &self.psi, self.cfg, eps)
    }
}

fn kinds() -> [BoundaryKind; 2] {
    [BoundaryKind::Neumann, BoundaryKind::Dirichlet]
}

/// `max |x_i - x_0| / |x_0|`, or the absolute spread when `x_0` vanishes.
fn relative_drift(values: &[f64]) -> f64 {
    let base = values[0].abs();
    let spread = values.iter().map(|v| (v - values[0]).abs()).fold(0.0, f64::max);
    if base < ZERO {
        spread
    } else {
        spread / base
    }
}

/// `max/min` of the magnitudes; `1` when all vanish, infinite when only some do.
pub fn variation_factor(values: &[f64]) -> f64 {
    let max = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let min = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    if max < ZERO {
        1.0
    } else {
        max / min
    }
}

/// `|x|` nonincreasing along the sequence with the last at most `factor` times the first.
pub fn decays_by(values: &[f64], factor: f64) -> bool {
    let mags: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    mags.windows(2).all(|w| w[1] <= w[0]) && mags[mags.len() - 1] <= factor * mags[0]
}

/// Fourth-order finite-difference `U_tt - c²(U_rr + 2U_r/r)` relative to the size of its terms.
pub fn fd_wave_residual(sol: &dyn SolutionEvaluator, t: f64, r: f64, h: f64) -> Result<f64> {
    let c2 = sol.config().c.powi(2);
    let u0 = sol.value(t, r)?;
    let at = |dt: f64, dr: f64| sol.value(t + dt, r + dr);
    let d2 = |m2: f64, m1: f64, p1: f64, p2: f64| (-m2 + 16.0 * m1 - 30.0 * u0 + 16.0 * p1 - p2) / (12.0 * h * h);
    let d1 = |m2: f64, m1: f64, p1: f64, p2: f64| (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let (tm2, tm1, tp1, tp2) = (at(-2.0 * h, 0.0)?, at(-h, 0.0)?, at(h, 0.0)?, at(2.0 * h, 0.0)?);
    let (rm2, rm1, rp1, rp2) = (at(0.0, -2.0 * h)?, at(0.0, -h)?, at(0.0, h)?, at(0.0, 2.0 * h)?);
    let utt = d2(tm2, tm1, tp1, tp2);
    let urr = d2(rm2, rm1, rp1, rp2);
    let ur = d1(rm2, rm1, rp1, rp2);
    let res = utt - c2 * (urr + 2.0 * ur / r);
    Ok(res.abs() / (1.0 + utt.abs() + c2 * (urr.abs() + (2.0 * ur / r).abs())))
}

/// Stencil points `(t, r)` for the residual check, kept `3(1 + c)h` away from every seam.
pub fn off_seam_points(sol: &dyn SolutionEvaluator, h: f64, times: &[f64], radii: &[f64]) -> Vec<(f64, f64)> {
    let cfg = sol.config();
    let margin = 3.0 * (1.0 + cfg.c) * h;
    let mut pts = Vec::new();
    for &t in times {
        if t - 2.0 * h < 0.0 || t + 2.0 * h > cfg.t_max {
            continue;
        }
        let seams = sol.breakpoints(t);
        for &r in radii {
            let near_seam = seams.iter().any(|s| (s - r).abs() < margin);
            if r - 2.0 * h > sol.domain_min_r() + h && !near_seam {
                pts.push((t, r));
            }
        }
    }
    pts
}

fn pde_residual(s: &Setup) -> Result<CheckResult> {
    let h = 1e-3;
    let times: Vec<f64> = (1..10).map(|i| 0.1 * i as f64 * s.cfg.t_max).collect();
    let radii: Vec<f64> = (1..40).map(|i| 0.05 * i as f64 * s.cfg.r_out / 2.0 + 0.013).collect();
    let mut sols: Vec<Evaluator> = vec![s.u.clone()];
    for kind in kinds() {
        sols.push(s.case(kind, VERIFY_EPS[0])?.solution);
    }
    let mut worst = 0.0_f64;
    for sol in &sols {
        for (t, r) in off_seam_points(sol.as_ref(), h, &times, &radii) {
            worst = worst.max(fd_wave_residual(sol.as_ref(), t, r, h)?);
        }
    }
    Ok(CheckResult::at_most("pde_residual", worst, 1e-5))
}

fn boundary_conditions(s: &Setup) -> Result<CheckResult> {
    let times = time_grid(s.cfg.t_max, 50);
    let mut worst = 0.0_f64;
    for eps in VERIFY_EPS {
        let n = s.case(BoundaryKind::Neumann, eps)?.solution;
        let d = s.case(BoundaryKind::Dirichlet, eps)?.solution;
        worst = worst.max(sup_abs(&times, |t| n.dr(t, eps))?);
        worst = worst.max(sup_abs(&times, |t| d.value(t, eps))?);
    }
    Ok(CheckResult::at_most("boundary_conditions", worst, 1e-12))
}

fn robin_compatibility(s: &Setup, sign: f64) -> Result<CheckResult> {
    // u = rU from the Neumann solution against u_r = sign·u/ε, u_r by a one-sided difference
    let h = 1e-5;
    let mut worst = 0.0_f64;
    for eps in VERIFY_EPS {
        let sol = s.case(BoundaryKind::Neumann, eps)?.solution;
        for t in time_grid(s.cfg.t_max, 21) {
            let v = |r: f64| -> Result<f64> { Ok(r * sol.value(t, r)?) };
            let ur = (-3.0 * v(eps)? + 4.0 * v(eps + h)? - v(eps + 2.0 * h)?) / (2.0 * h);
            let target = sign * v(eps)? / eps;
            worst = worst.max((ur - target).abs() / (1.0 + target.abs()));
        }
    }
    Ok(CheckResult::at_most("robin_compatibility", worst, 1e-5))
}

fn energy_constancy(s: &Setup) -> Result<CheckResult> {
    let times = time_grid(s.cfg.t_max, 9);
    let drift = |f: &(dyn Fn(f64) -> Result<f64> + Sync)| -> Result<f64> {
        let v = times.par_iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Ok(relative_drift(&v))
    };
    let tol = s.tol;
    let u = s.u.as_ref();
    let mut worst = drift(&|t| energy_first(u, t, 0.0, tol))?;
    worst = worst.max(drift(&|t| energy_second(u, t, 0.0, tol))?);
    for eps in VERIFY_EPS {
        for kind in kinds() {
            let sol = s.case(kind, eps)?.solution;
            worst = worst.max(drift(&|t| energy_first(sol.as_ref(), t, eps, tol))?);
            if kind == BoundaryKind::Neumann {
                worst = worst.max(drift(&|t| energy_second(sol.as_ref(), t, eps, tol))?);
            }
        }
    }
    Ok(CheckResult::at_most("energy_constancy", worst, 1e-6))
}

fn identities(s: &Setup) -> Result<CheckResult> {
    let mut worst = 0.0_f64;
    for eps in VERIFY_EPS {
        for kind in kinds() {
            let case = s.case(kind, eps)?;
            let problem = s.registry.for_kind(kind)?;
            let (a, b) = problem.identities(s.u.as_ref(), &case, s.cfg.t_max, &s.features, s.tol)?;
            worst = worst.max(a.relative());
            if let Some(b) = b {
                worst = worst.max(b.relative());
            }
        }
    }
    Ok(CheckResult::at_most("energy_identities", worst, 1e-5))
}

fn q_decay(s: &Setup, eps_list: &[f64]) -> Result<CheckResult> {
    let mut failures = Vec::new();
    for k in [2.0, 3.0] {
        for t in [0.25, 0.5, 1.0].map(|f| f * s.cfg.t_max) {
            let q = eps_list
                .iter()
                .map(|&eps| {
                    let p = s.registry.for_kind(BoundaryKind::Neumann)?;
                    let (pe, qe) = (p.modify(&s.phi, eps)?, p.modify(&s.psi, eps)?);
                    q_functional(&pe, &qe, &s.cfg, eps, k, t)
                })
                .collect::<Result<Vec<_>>>()?;
            if !decays_by(&q, 0.1) {
                let shown: Vec<String> = q.iter().map(|v| format!("{v:.3e}")).collect();
                failures.push(format!("k={k} t={t}: [{}]", shown.join(", ")));
            }
        }
    }
    let detail = if failures.is_empty() {
        "all decay tenfold".to_string()
    } else {
        format!("no tenfold monotone decay for {}", failures.join("; "))
    };
    Ok(CheckResult::new("q_decay", failures.is_empty(), detail))
}

/// The scaled boundary quantities for each ε, keyed by name.
pub fn boundary_constant_table(
    config: &SweepConfig,
) -> Result<Vec<(String, Vec<f64>)>> {
    let setup = setup(config)?;
    boundary_table(&setup, &config.eps_list)
}

fn boundary_table(s: &Setup, eps_list: &[f64]) -> Result<Vec<(String, Vec<f64>)>> {
    let times = time_grid(s.cfg.t_max, BOUNDARY_SAMPLES);
    let per_eps = eps_list
        .par_iter()
        .map(|&eps| {
            let mut all = cauchy_boundary_constants(s.u.as_ref(), eps, &times)?;
            for kind in kinds() {
                let case = s.case(kind, eps)?;
                all.extend(s.registry.for_kind(kind)?.boundary_constants(&case, &times)?);
            }
            Ok(all.into_iter().collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let names: Vec<String> = per_eps[0].iter().map(|(n, _)| n.clone()).collect();
    Ok(names
        .into_iter()
        .enumerate()
        .map(|(i, n)| (n, per_eps.iter().map(|row| row[i].1).collect()))
        .collect())
}

fn boundary_constants(s: &Setup, eps_list: &[f64]) -> Result<CheckResult> {
    let table = boundary_table(s, eps_list)?;
    let unstable: Vec<String> = table
        .iter()
        .filter(|(_, v)| variation_factor(v) >= 3.0)
        .map(|(n, v)| format!("{n} x{:.2}", variation_factor(v)))
        .collect();
    let detail = if unstable.is_empty() {
        "all within a factor 3".to_string()
    } else {
        format!("vary by 3x or more: {}", unstable.join(", "))
    };
    Ok(CheckResult::new("boundary_constants", unstable.is_empty(), detail))
}

fn gronwall(s: &Setup) -> Result<CheckResult> {
    let t_max = s.cfg.t_max;
    let mut worst = f64::NEG_INFINITY;
    for eps in VERIFY_EPS {
        for kind in kinds() {
            let case = s.case(kind, eps)?;
            let d = |t: f64| diff_breakdown(s.u.as_ref(), &case.extended, kind, t, s.tol);
            let e_int = QuadratureRequest::new(|t| d(t).map_or(f64::NAN, |b| b.e_eps), 0.0, t_max)
                .tolerances(1e-8, 1e-12)
                .integrate()?
                .value;
            let lhs = d(t_max)?.d_eps;
            let bound = 2.0 * (d(0.0)?.d_eps + t_max * e_int) + 1e-8;
            worst = worst.max(lhs - bound);
        }
    }
    Ok(CheckResult::new(
        "gronwall",
        worst <= 0.0,
        format!("max D(T) - bound = {worst:.3e}"),
    ))
}

/// Max difference between the closed form and the leapfrog solution, for
/// each spacing in `hs`, over `t ∈ {T/2, T}` and radii spread across
/// `[r0, R_out]`. The radii are snapped to the grid of `hs[0]`, and every
/// grid uses the time step of `hs[0]` scaled by `h/hs[0]`, so when `hs[0]/h`
/// is an integer all samples are nodes of every grid.
#[allow(clippy::too_many_arguments)]
pub fn oracle_errors(
    sol: &dyn SolutionEvaluator,
    phi: &RadialProfile,
    psi: &RadialProfile,
    eps: f64,
    boundary: FdBoundary,
    hs: &[f64],
    cfl: f64,
) -> Result<Vec<f64>> {
    let cfg = *sol.config();
    let r0 = sol.domain_min_r();
    let h0 = hs[0];
    let times = [0.5 * cfg.t_max, cfg.t_max];
    let radii: Vec<f64> = [0.01, 0.1, 0.2, 0.3, 0.45, 0.6, 0.8]
        .iter()
        .map(|f| r0 + ((f * cfg.r_out / h0).round().max(1.0)) * h0)
        .filter(|&r| r < cfg.r_out)
        .collect();
    let k0 = cfl_step(&cfg, h0, cfl);
    hs.par_iter()
        .map(|&h| {
            let gs = solve_1d(phi, psi, &cfg, eps, boundary, h, k0 * h / h0)?;
            let mut worst = 0.0_f64;
            for &t in &times {
                for &r in &radii {
                    worst = worst.max((sol.value(t, r)? - sample_u(&gs, t, r)?).abs());
                }
            }
            Ok(worst)
        })
        .collect()
}

/// Consecutive error ratios; `None` when every error is negligible.
pub fn error_ratios(errors: &[f64]) -> Option<Vec<f64>> {
    if errors.iter().all(|e| *e < ZERO) {
        return None;
    }
    Some(errors.windows(2).map(|w| w[0] / w[1]).collect())
}

fn oracle(s: &Setup) -> Result<CheckResult> {
    let eps = VERIFY_EPS[0];
    let mut details = Vec::new();
    let mut ok = true;
    let mut run = |name: &str, sol: &dyn SolutionEvaluator, phi: &RadialProfile, psi: &RadialProfile, b| -> Result<()> {
        let errs = oracle_errors(sol, phi, psi, eps, b, &ORACLE_GRIDS, 0.9)?;
        match error_ratios(&errs) {
            Some(ratios) => {
                ok &= ratios.iter().all(|r| (3.2..=5.0).contains(r));
                details.push(format!("{name} ratios {ratios:.2?}"));
            }
            None => details.push(format!("{name} zero")),
        }
        Ok(())
    };
    run("cauchy", s.u.as_ref(), &s.phi, &s.psi, FdBoundary::CauchyDirichletAtZero)?;
    for kind in kinds() {
        let case = s.case(kind, eps)?;
        let b = s.registry.for_kind(kind)?.fd_boundary();
        run(kind.name(), case.solution.as_ref(), &case.phi_eps, &case.psi_eps, b)?;
    }
    Ok(CheckResult::new("fd_oracle", ok, details.join(", ")))
}

fn setup(config: &SweepConfig) -> Result<Setup> {
    config.validate()?;
    let (phi, psi) = config.profiles()?;
    let cfg = config.wave();
    Ok(Setup {
        u: std::sync::Arc::new(cauchy_solution(&phi, &psi, cfg)?),
        cfg,
        tol: config.tolerances,
        phi,
        psi,
        registry: ProblemRegistry::with_cutoff(&config.cutoff)?,
        features: config.features(),
    })
}

/// Runs every check on the configured data. Check failures are results;
/// `Err` means the configuration was unusable or an evaluation broke down.
pub fn run_verify(opts: &VerifyOptions) -> Result<VerifySummary> {
    let s = setup(&opts.config)?;
    let eps_list = &opts.config.eps_list;
    type Check<'a> = Box<dyn Fn() -> Result<CheckResult> + Sync + 'a>;
    let checks: Vec<Check> = vec![
        Box::new(|| pde_residual(&s)),
        Box::new(|| boundary_conditions(&s)),
        Box::new(|| robin_compatibility(&s, opts.robin_sign)),
        Box::new(|| energy_constancy(&s)),
        Box::new(|| identities(&s)),
        Box::new(|| q_decay(&s, eps_list)),
        Box::new(|| boundary_constants(&s, eps_list)),
        Box::new(|| gronwall(&s)),
        Box::new(|| oracle(&s)),
    ];
    let checks = checks.par_iter().map(|c| c()).collect::<Result<Vec<_>>>()?;
    for c in &checks {
        info!("{c}");
    }
    Ok(VerifySummary { checks })
}
