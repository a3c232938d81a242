//! Adaptive one-dimensional quadrature.
//!
//! Every integral in the crate goes through [`QuadratureRequest`]: the `∫ sψ(s) ds`
//! terms of the solution formulas, the exponentially weighted boundary-layer
//! integrals of the exterior Neumann solution, and all energy and Sobolev norms.
//!
//! The scheme is global adaptive bisection driven by the 10/21-point
//! Gauss–Kronrod pair. The initial partition respects declared breakpoints
//! (panels never straddle them) and, when a layer hint is given, is graded
//! geometrically toward the layer. Panels are refined in order of decreasing
//! error estimate with ties broken by creation order, so the result is a pure
//! function of the request.

mod gauss;

pub use gauss::gauss_legendre;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, WaveError};
use gauss::{gk21, GK21_POINTS};

pub const DEFAULT_REL_TOL: f64 = 1e-10;
pub const DEFAULT_ABS_TOL: f64 = 1e-14;
pub const DEFAULT_MAX_EVALUATIONS: usize = 1_000_000;

/// Relative and absolute error targets for one integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: DEFAULT_REL_TOL,
            abs: DEFAULT_ABS_TOL,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    /// Both tolerances scaled by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            rel: self.rel * factor,
            abs: self.abs * factor,
        }
    }
}

/// Location and width of a thin layer where the integrand concentrates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerHint {
    pub location: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

/// A single integration problem. Built with chained setters:
///
/// ```
/// use exterior_wave::quadrature::QuadratureRequest;
/// let r = QuadratureRequest::new(|s: f64| s * s, 0.0, 1.0).integrate().unwrap();
/// assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
/// ```
pub struct QuadratureRequest<F> {
    integrand: F,
    lower: f64,
    upper: f64,
    tol: Tolerance,
    layer_hint: Option<LayerHint>,
    breakpoints: Vec<f64>,
    max_evaluations: usize,
}

impl<F> QuadratureRequest<F>
where
    F: Fn(f64) -> f64,
{
    pub fn new(integrand: F, lower: f64, upper: f64) -> Self {
        Self {
            integrand,
            lower,
            upper,
            tol: Tolerance::default(),
            layer_hint: None,
            breakpoints: Vec::new(),
            max_evaluations: DEFAULT_MAX_EVALUATIONS,
        }
    }

    pub fn tolerance(mut self, tol: Tolerance) -> Self {
        self.tol = tol;
        self
    }

    pub fn tolerances(self, rel_tol: f64, abs_tol: f64) -> Self {
        self.tolerance(Tolerance::new(rel_tol, abs_tol))
    }

    pub fn layer_hint(mut self, location: f64, width: f64) -> Self {
        self.layer_hint = Some(LayerHint { location, width });
        self
    }

    /// Known kinks or seams. Points outside the open interval are ignored.
    pub fn breakpoints<I: IntoIterator<Item = f64>>(mut self, points: I) -> Self {
        self.breakpoints.extend(points);
        self
    }

    pub fn max_evaluations(mut self, budget: usize) -> Self {
        self.max_evaluations = budget;
        self
    }

    pub fn integrate(&self) -> Result<QuadratureResult> {
        integrate(self)
    }

    fn validate(&self) -> Result<()> {
        if !self.lower.is_finite() || !self.upper.is_finite() {
            return Err(invalid("integration limits must be finite"));
        }
        if self.lower > self.upper {
            return Err(invalid(format!(
                "lower limit {} exceeds upper limit {}",
                self.lower, self.upper
            )));
        }
        if !(self.tol.rel > 0.0) || !(self.tol.abs > 0.0) {
            return Err(invalid("tolerances must be positive"));
        }
        if let Some(h) = self.layer_hint {
            if !(h.width > 0.0) || !h.location.is_finite() {
                return Err(invalid("layer hint needs a finite location and positive width"));
            }
        }
        if self.breakpoints.iter().any(|b| b.is_nan()) {
            return Err(invalid("breakpoint is NaN"));
        }
        Ok(())
    }

    fn initial_cuts(&self) -> Vec<f64> {
        let (a, b) = (self.lower, self.upper);
        let mut cuts: Vec<f64> = self
            .breakpoints
            .iter()
            .copied()
            .filter(|&x| x > a && x < b)
            .collect();

        if let Some(LayerHint { location, width }) = self.layer_hint {
            let loc = location.clamp(a, b);
            if loc > a && loc < b {
                cuts.push(loc);
            }
            // halve the distance to the layer until panels are narrower than width/4
            for (far, sign) in [(b - loc, 1.0), (loc - a, -1.0)] {
                let mut d = far;
                while d > 0.0 && d >= 0.25 * width {
                    d *= 0.5;
                    let x = loc + sign * d;
                    if x > a && x < b {
                        cuts.push(x);
                    }
                }
            }
        }

        cuts.push(a);
        cuts.push(b);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        cuts
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    order: usize,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.order.cmp(&self.order))
    }
}

/// Rounding of a 21-term weighted sum, relative to `∫|f|`. No panel claims less.
const ROUNDOFF_FLOOR: f64 = 4.0 * f64::EPSILON;

fn apply_rule<F>(f: &F, a: f64, b: f64, order: usize) -> Result<Panel>
where
    F: Fn(f64) -> f64,
{
    let est = gk21(f, a, b).map_err(|abscissa| WaveError::Evaluation { abscissa })?;
    Ok(Panel {
        a,
        b,
        value: est.kronrod,
        // |K - G| says nothing once both rules agree to rounding
        error: (est.kronrod - est.gauss).abs().max(ROUNDOFF_FLOOR * est.abs_kronrod),
        order,
    })
}

/// Sums panel values and errors in left-to-right order.
fn ordered_totals(panels: &mut [Panel]) -> (f64, f64) {
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

/// Runs the adaptive scheme on `req`.
pub fn integrate<F>(req: &QuadratureRequest<F>) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    req.validate()?;
    if req.lower == req.upper {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }

    let f = &req.integrand;
    let cuts = req.initial_cuts();
    let mut heap = BinaryHeap::with_capacity(cuts.len() * 2);
    let mut settled: Vec<Panel> = Vec::new();
    let mut order = 0usize;
    let mut evaluations = 0usize;
    let mut value = 0.0;
    let mut error = 0.0;

    for w in cuts.windows(2) {
        let p = apply_rule(f, w[0], w[1], order)?;
        order += 1;
        evaluations += GK21_POINTS;
        value += p.value;
        error += p.error;
        heap.push(p);
    }

    let target = |v: f64| req.tol.abs.max(req.tol.rel * v.abs());
    let mut since_resum = 0usize;

    loop {
        if error <= target(value) {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        // panel cannot be split any further in floating point
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) <= 1e-15 * mid.abs() {
            settled.push(worst);
            continue;
        }
        if evaluations + 2 * GK21_POINTS > req.max_evaluations {
            heap.push(worst);
            break;
        }
        let left = apply_rule(f, worst.a, mid, order)?;
        let right = apply_rule(f, mid, worst.b, order + 1)?;
        order += 2;
        evaluations += 2 * GK21_POINTS;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);

        since_resum += 1;
        if since_resum == 64 {
            since_resum = 0;
            let (v, e) = heap
                .iter()
                .chain(settled.iter())
                .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
            value = v;
            error = e;
        }
    }

    let mut panels: Vec<Panel> = heap.into_vec();
    panels.extend(settled);
    let (value, error_estimate) = ordered_totals(&mut panels);
    if error_estimate <= target(value) {
        Ok(QuadratureResult {
            value,
            error_estimate,
            evaluations,
        })
    } else {
        Err(WaveError::Convergence {
            best: value,
            error_estimate,
            evaluations,
        })
    }
}

/// `4π ∫ f(r) r² dr` over `[r_min, r_max]`: the integral over ℝ³ of a radial
/// function restricted to a shell.
pub fn integrate_radial_r2<F>(
    integrand: F,
    r_min: f64,
    r_max: f64,
    tol: Tolerance,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    integrate_radial_r2_with(integrand, r_min, r_max, tol, &[])
}

/// As [`integrate_radial_r2`] with declared breakpoints.
pub fn integrate_radial_r2_with<F>(
    integrand: F,
    r_min: f64,
    r_max: f64,
    tol: Tolerance,
    breakpoints: &[f64],
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let four_pi = 4.0 * PI;
    let res = QuadratureRequest::new(|r: f64| integrand(r) * r * r, r_min, r_max)
        .tolerance(Tolerance::new(tol.rel, tol.abs / four_pi))
        .breakpoints(breakpoints.iter().copied())
        .integrate()?;
    Ok(QuadratureResult {
        value: four_pi * res.value,
        error_estimate: four_pi * res.error_estimate,
        evaluations: res.evaluations,
    })
}
