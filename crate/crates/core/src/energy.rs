//! Energies and Sobolev distances of radial fields, and the energy identities
//! linking the exterior problems to the whole-space one.
//!
//! For a radial field `W(t, r)` every quantity reduces to a one-dimensional
//! integral `4π∫ f(r) r² dr`:
//!
//! * `|∇W|² = W_r²`
//! * `Σᵢ|∂_t∂ᵢW|² = W_rt²`
//! * `|D²W|² = W_rr² + 2(W_r/r)²`
//!
//! `W_r/r` stays bounded at the origin for smooth fields, where it tends to `W_rr`.

use std::cell::RefCell;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::closed_form::{extend, BoundaryKind, Jet, SolutionEvaluator, WaveConfig};
use crate::error::{invalid, Result, WaveError};
use crate::quadrature::{integrate_radial_r2_with, QuadratureRequest, QuadratureResult, Tolerance};

/// `a - b` as a radial field on the intersection of their domains.
#[derive(Debug, Clone, Copy)]
pub struct DifferenceField<'a> {
    a: &'a dyn SolutionEvaluator,
    b: &'a dyn SolutionEvaluator,
}

impl<'a> DifferenceField<'a> {
    pub fn new(a: &'a dyn SolutionEvaluator, b: &'a dyn SolutionEvaluator) -> Self {
        Self { a, b }
    }
}

impl SolutionEvaluator for DifferenceField<'_> {
    fn jet(&self, t: f64, r: f64) -> Result<Jet> {
        Ok(self.a.jet(t, r)? - self.b.jet(t, r)?)
    }

    fn domain_min_r(&self) -> f64 {
        self.a.domain_min_r().max(self.b.domain_min_r())
    }

    fn config(&self) -> &WaveConfig {
        self.a.config()
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        let mut pts = self.a.breakpoints(t);
        pts.extend(self.b.breakpoints(t));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    fn second_order_available(&self) -> bool {
        self.a.second_order_available() && self.b.second_order_available()
    }
}

/// Integrates a fallible integrand, reporting the first evaluation error rather than a generic NaN.
fn try_integrate<F>(f: F, run: impl FnOnce(&dyn Fn(f64) -> f64) -> Result<QuadratureResult>) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    let failure: RefCell<Option<WaveError>> = RefCell::new(None);
    let g = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let res = run(&g);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    res
}

/// `4π∫_{r_min}^{R_out} f(jet(t, r)) r² dr` with the field's breakpoints declared.
fn radial_integral(
    w: &dyn SolutionEvaluator,
    t: f64,
    r_min: f64,
    tol: Tolerance,
    f: impl Fn(&Jet, f64) -> f64,
) -> Result<QuadratureResult> {
    let r_out = w.config().r_out;
    if r_min < w.domain_min_r() {
        return Err(invalid(format!(
            "r_min = {r_min} is below the field's domain r >= {}",
            w.domain_min_r()
        )));
    }
    let breaks = w.breakpoints(t);
    try_integrate(
        |r| w.jet(t, r).map(|j| f(&j, r)),
        |g| integrate_radial_r2_with(g, r_min, r_out, tol, &breaks),
    )
}

fn first_integrand(j: &Jet, c2: f64) -> f64 {
    0.5 * (j.dt * j.dt + c2 * j.dr * j.dr)
}

/// `½(|∂_t∇W|² + c²|D²W|²)` for a radial field.
fn second_integrand(j: &Jet, r: f64, c2: f64) -> f64 {
    if r == 0.0 {
        // W_r/r → W_rr at the origin
        return 0.5 * (j.drt * j.drt + 3.0 * c2 * j.drr * j.drr);
    }
    let wr_over_r = j.dr / r;
    0.5 * (j.drt * j.drt + c2 * (j.drr * j.drr + 2.0 * wr_over_r * wr_over_r))
}

fn first_q(w: &dyn SolutionEvaluator, t: f64, r_min: f64, tol: Tolerance) -> Result<QuadratureResult> {
    let c2 = w.config().c.powi(2);
    radial_integral(w, t, r_min, tol, |j, _| first_integrand(j, c2))
}

fn second_q(w: &dyn SolutionEvaluator, t: f64, r_min: f64, tol: Tolerance) -> Result<QuadratureResult> {
    if !w.second_order_available() {
        return Err(WaveError::Unsupported(
            "second-order energy of a field with a kink (not in H²)".into(),
        ));
    }
    let c2 = w.config().c.powi(2);
    radial_integral(w, t, r_min, tol, |j, r| second_integrand(j, r, c2))
}

fn l2_q(w: &dyn SolutionEvaluator, t: f64, r_min: f64, tol: Tolerance) -> Result<QuadratureResult> {
    radial_integral(w, t, r_min, tol, |j, _| 0.5 * j.value * j.value)
}

/// `½∫_{|x|>r_min} |∂_tW|² + c²|∇W|² dx`.
pub fn energy_first(w: &dyn SolutionEvaluator, t: f64, r_min: f64, tol: Tolerance) -> Result<f64> {
    w.config().check_time(t, 0.0)?;
    Ok(first_q(w, t, r_min, tol)?.value)
}

/// `Σᵢ ½∫_{|x|>r_min} |∂_t∂ᵢW|² + c²|∇∂ᵢW|² dx`.
pub fn energy_second(w: &dyn SolutionEvaluator, t: f64, r_min: f64, tol: Tolerance) -> Result<f64> {
    w.config().check_time(t, 0.0)?;
    Ok(second_q(w, t, r_min, tol)?.value)
}

/// `½∫_{|x|>r_min} W² dx`.
pub fn half_l2_squared(w: &dyn SolutionEvaluator, t: f64, r_min: f64, tol: Tolerance) -> Result<f64> {
    w.config().check_time(t, 0.0)?;
    Ok(l2_q(w, t, r_min, tol)?.value)
}

/// Distances between the whole-space solution and an extended exterior solution at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub t: f64,
    /// `½‖U - Ũ^ε‖²_{L²}`
    pub d_eps: f64,
    /// First-order energy of `U - Ũ^ε`.
    pub e_eps: f64,
    /// Second-order energy of `U - Ũ^ε`; absent for Dirichlet.
    pub ee_eps: Option<f64>,
    /// Sum of the quadrature error estimates.
    pub quad_error: f64,
}

/// Energies of `U - Ũ^ε` over all of ℝ³. `u_ext` must already be extended into the ball.
pub fn diff_breakdown(
    u: &dyn SolutionEvaluator,
    u_ext: &dyn SolutionEvaluator,
    kind: BoundaryKind,
    t: f64,
    tol: Tolerance,
) -> Result<EnergyBreakdown> {
    if u_ext.domain_min_r() != 0.0 {
        return Err(invalid("the exterior solution must be extended into the ball first"));
    }
    u.config().check_time(t, 0.0)?;
    let w = DifferenceField::new(u, u_ext);
    let ((d, e), ee) = rayon::join(
        || rayon::join(|| l2_q(&w, t, 0.0, tol), || first_q(&w, t, 0.0, tol)),
        || match kind {
            BoundaryKind::Neumann => second_q(&w, t, 0.0, tol).map(Some),
            BoundaryKind::Dirichlet => Ok(None),
        },
    );
    let (d, e, ee) = (d?, e?, ee?);
    Ok(EnergyBreakdown {
        t,
        d_eps: d.value,
        e_eps: e.value,
        ee_eps: ee.map(|q| q.value),
        quad_error: d.error_estimate + e.error_estimate + ee.map_or(0.0, |q| q.error_estimate),
    })
}

/// Both sides of an energy identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl IdentityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            residual: (lhs - rhs).abs(),
        }
    }

    /// `residual / (1 + |lhs|)`.
    pub fn relative(&self) -> f64 {
        self.residual / (1.0 + self.lhs.abs())
    }
}

/// Times at which the boundary traces at `r = ε` lose smoothness: the
/// characteristics through the data features reach the sphere.
fn trace_breakpoints(cfg: &WaveConfig, eps: f64, features: &[f64]) -> Vec<f64> {
    let mut ts = vec![eps / cfg.c];
    for &s in features {
        ts.extend([(s - eps) / cfg.c, (s + eps) / cfg.c, (s - 2.0 * eps) / cfg.c]);
    }
    ts.retain(|t| *t > 0.0 && *t < cfg.t_max);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

fn time_integral(
    f: impl Fn(f64) -> Result<f64>,
    t_final: f64,
    breaks: &[f64],
    tol: Tolerance,
) -> Result<f64> {
    let q = try_integrate(f, |g| {
        QuadratureRequest::new(g, 0.0, t_final)
            .tolerance(tol)
            .breakpoints(breaks.iter().copied())
            .integrate()
    })?;
    Ok(q.value)
}

fn require_kind(sol: &dyn SolutionEvaluator, kind: BoundaryKind, eps: f64) -> Result<()> {
    if sol.boundary_kind() != Some(kind) || sol.domain_min_r() != eps {
        return Err(invalid(format!("expected an exterior {kind} solution on r >= {eps}")));
    }
    Ok(())
}

/// The first-order identity for the Neumann problem:
///
/// `𝓔^ε(T) = 𝓔^ε(0) + [½vol(B_ε)(U^ε_t)² - U^ε_t ∫_{B_ε}U_t]₀ᵀ + c²·4πε²∫₀ᵀ U^ε_t ∂_rU dt`,
///
/// with `U^ε_t` and `∂_rU` taken at `r = ε`. `features` are the data support radii,
/// used to split the time integral.
pub fn first_identity_residual(
    u: &dyn SolutionEvaluator,
    un: Arc<dyn SolutionEvaluator>,
    eps: f64,
    t_final: f64,
    features: &[f64],
    tol: Tolerance,
) -> Result<IdentityCheck> {
    require_kind(un.as_ref(), BoundaryKind::Neumann, eps)?;
    let cfg = *u.config();
    cfg.check_time(t_final, 0.0)?;
    let ext = extend(un.clone(), eps, BoundaryKind::Neumann)?;
    let w = DifferenceField::new(u, &ext);
    let lhs = first_q(&w, t_final, 0.0, tol)?.value;
    let e0 = first_q(&w, 0.0, 0.0, tol)?.value;

    let vol = 4.0 / 3.0 * std::f64::consts::PI * eps.powi(3);
    let bracket = |t: f64| -> Result<f64> {
        let ut_eps = un.dt(t, eps)?;
        let inner = try_integrate(
            |r| u.dt(t, r),
            |g| integrate_radial_r2_with(g, 0.0, eps, tol, &[]),
        )?
        .value;
        Ok(0.5 * vol * ut_eps * ut_eps - ut_eps * inner)
    };
    let area = 4.0 * std::f64::consts::PI * eps * eps;
    let flux = time_integral(
        |t| Ok(un.dt(t, eps)? * u.dr(t, eps)?),
        t_final,
        &trace_breakpoints(&cfg, eps, features),
        tol,
    )?;
    let rhs = e0 + bracket(t_final)? - bracket(0.0)? + cfg.c * cfg.c * area * flux;
    Ok(IdentityCheck::new(lhs, rhs))
}

/// The second-order identity for the Neumann problem:
/// `𝔼^ε(T) = 𝔼^ε(0) + c²·4πε²∫₀ᵀ ∂_rU_t(t, ε) ∂_rrU^ε(t, ε) dt`.
pub fn second_identity_residual(
    u: &dyn SolutionEvaluator,
    un: Arc<dyn SolutionEvaluator>,
    eps: f64,
    t_final: f64,
    features: &[f64],
    tol: Tolerance,
) -> Result<IdentityCheck> {
    require_kind(un.as_ref(), BoundaryKind::Neumann, eps)?;
    let cfg = *u.config();
    cfg.check_time(t_final, 0.0)?;
    let ext = extend(un.clone(), eps, BoundaryKind::Neumann)?;
    let w = DifferenceField::new(u, &ext);
    let lhs = second_q(&w, t_final, 0.0, tol)?.value;
    let e0 = second_q(&w, 0.0, 0.0, tol)?.value;
    let area = 4.0 * std::f64::consts::PI * eps * eps;
    let flux = time_integral(
        |t| Ok(u.drt(t, eps)? * un.drr(t, eps)?),
        t_final,
        &trace_breakpoints(&cfg, eps, features),
        tol,
    )?;
    Ok(IdentityCheck::new(lhs, e0 + cfg.c * cfg.c * area * flux))
}

/// The Dirichlet energy rate integrated in time:
/// `𝓔^ε(T) = 𝓔^ε(0) + c²·4πε²∫₀ᵀ U_t(t, ε) ∂_rU^ε(t, ε) dt`.
pub fn dirichlet_rate_residual(
    u: &dyn SolutionEvaluator,
    ud: Arc<dyn SolutionEvaluator>,
    eps: f64,
    t_final: f64,
    features: &[f64],
    tol: Tolerance,
) -> Result<IdentityCheck> {
    require_kind(ud.as_ref(), BoundaryKind::Dirichlet, eps)?;
    let cfg = *u.config();
    cfg.check_time(t_final, 0.0)?;
    let ext = extend(ud.clone(), eps, BoundaryKind::Dirichlet)?;
    let w = DifferenceField::new(u, &ext);
    let lhs = first_q(&w, t_final, 0.0, tol)?.value;
    let e0 = first_q(&w, 0.0, 0.0, tol)?.value;
    let area = 4.0 * std::f64::consts::PI * eps * eps;
    let flux = time_integral(
        |t| Ok(u.dt(t, eps)? * ud.dr(t, eps)?),
        t_final,
        &trace_breakpoints(&cfg, eps, features),
        tol,
    )?;
    Ok(IdentityCheck::new(lhs, e0 + cfg.c * cfg.c * area * flux))
}

/// `‖U(t) - Ũ^ε(t)‖_{H^order(ℝ³)}` computed directly from the spatial derivatives.
/// Order 2 needs the Neumann extension; the Dirichlet extension is only in H¹.
pub fn sobolev_distance(
    u: &dyn SolutionEvaluator,
    u_ext: &dyn SolutionEvaluator,
    kind: BoundaryKind,
    t: f64,
    order: u32,
    tol: Tolerance,
) -> Result<f64> {
    match (order, kind) {
        (1, _) | (2, BoundaryKind::Neumann) => {}
        (2, BoundaryKind::Dirichlet) => {
            return Err(WaveError::Unsupported(
                "the Dirichlet extension is not in H², use order 1".into(),
            ))
        }
        _ => return Err(WaveError::Unsupported(format!("Sobolev order {order}"))),
    }
    u.config().check_time(t, 0.0)?;
    let w = DifferenceField::new(u, u_ext);
    let q = radial_integral(&w, t, 0.0, tol, |j, r| sobolev_density(j, r, order))?;
    Ok(q.value.max(0.0).sqrt())
}

/// `W² + W_r²`, plus `W_rr² + 2(W_r/r)²` for order 2.
pub(crate) fn sobolev_density(j: &Jet, r: f64, order: u32) -> f64 {
    let mut v = j.value * j.value + j.dr * j.dr;
    if order >= 2 {
        let wr_over_r = if r == 0.0 { j.drr } else { j.dr / r };
        v += j.drr * j.drr + 2.0 * wr_over_r * wr_over_r;
    }
    v
}
