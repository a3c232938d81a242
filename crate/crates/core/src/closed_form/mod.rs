//! Explicit radial solutions of `u_tt = c² Δu` in three space dimensions.
//!
//! Every solution is written through the reduction `U = u/r`, where `u` solves
//! the one-dimensional wave equation. The evaluators return a full [`Jet`]
//! (value plus the partial derivatives the energies need) from a single pass,
//! so each point costs one quadrature of the integral terms.

mod cauchy;
mod dirichlet;
mod extension;
mod neumann;
mod reflect;
mod trace;

pub use cauchy::{cauchy_center_limit, cauchy_solution, CauchySolution};
pub use dirichlet::{dirichlet_boundary_dr, dirichlet_solution, DirichletSolution};
pub use extension::{extend, ExtendedSolution};
pub use neumann::{neumann_solution, NeumannSolution};
pub use trace::{neumann_boundary_trace, q_functional, q_functional_direct, BoundaryTrace};

use std::fmt;
use std::ops::Sub;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, WaveError};
use crate::quadrature::{QuadratureRequest, Tolerance};
use crate::radial_data::RadialProfile;

/// Global problem parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveConfig {
    /// Wave speed.
    pub c: f64,
    /// Time horizon.
    #[serde(rename = "T")]
    pub t_max: f64,
    /// Radius beyond which every solution vanishes on `[0, T]`.
    #[serde(rename = "R_out")]
    pub r_out: f64,
}

impl WaveConfig {
    pub fn new(c: f64, t_max: f64, r_out: f64) -> Result<Self> {
        let cfg = Self { c, t_max, r_out };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c", self.c), ("T", self.t_max), ("R_out", self.r_out)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Finite propagation: data supported in `B_support` stay inside `R_out` up to `T`.
    pub fn check_support(&self, support_radius: f64) -> Result<()> {
        let need = support_radius + self.c * self.t_max;
        if self.r_out < need {
            return Err(invalid(format!(
                "R_out = {} is smaller than support radius + cT = {need}",
                self.r_out
            )));
        }
        Ok(())
    }

    pub(crate) fn check_time(&self, t: f64, r: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.t_max) {
            return Err(WaveError::Domain {
                t,
                r,
                reason: format!("time outside [0, {}]", self.t_max),
            });
        }
        Ok(())
    }
}

/// Boundary condition imposed on the sphere `|x| = ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    Neumann,
    Dirichlet,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Neumann => "neumann",
            Self::Dirichlet => "dirichlet",
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundaryKind {
    type Err = WaveError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "neumann" => Ok(Self::Neumann),
            "dirichlet" => Ok(Self::Dirichlet),
            other => Err(invalid(format!("unknown boundary kind '{other}'"))),
        }
    }
}

/// Value and partial derivatives of a radial field at one point `(t, r)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub value: f64,
    pub dt: f64,
    pub dr: f64,
    pub drt: f64,
    pub drr: f64,
    pub dtt: f64,
}

impl Jet {
    /// Converts a jet of `u = rU` into a jet of `U`.
    pub(crate) fn from_reduced(r: f64, u: &Jet) -> Jet {
        let value = u.value / r;
        let dt = u.dt / r;
        let dr = (u.dr - value) / r;
        Jet {
            value,
            dt,
            dr,
            drt: (u.drt - dt) / r,
            drr: (u.drr - 2.0 * dr) / r,
            dtt: u.dtt / r,
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.value, self.dt, self.dr, self.drt, self.drr, self.dtt]
            .iter()
            .all(|v| v.is_finite())
    }
}

impl Sub for Jet {
    type Output = Jet;

    fn sub(self, o: Jet) -> Jet {
        Jet {
            value: self.value - o.value,
            dt: self.dt - o.dt,
            dr: self.dr - o.dr,
            drt: self.drt - o.drt,
            drr: self.drr - o.drr,
            dtt: self.dtt - o.dtt,
        }
    }
}

/// A radial solution `(t, r) ↦ U(t, r)` with analytic partial derivatives.
pub trait SolutionEvaluator: Send + Sync + fmt::Debug {
    fn jet(&self, t: f64, r: f64) -> Result<Jet>;

    /// Smallest admissible radius: 0 for whole-space fields, ε for exterior ones.
    fn domain_min_r(&self) -> f64;

    fn config(&self) -> &WaveConfig;

    /// Radii at time `t` where the field is only finitely smooth
    /// (characteristic seams and images of data features).
    fn breakpoints(&self, t: f64) -> Vec<f64>;

    /// The boundary condition satisfied at `domain_min_r`, if any.
    fn boundary_kind(&self) -> Option<BoundaryKind> {
        None
    }

    /// Whether second spatial derivatives are square integrable over the whole domain.
    fn second_order_available(&self) -> bool {
        true
    }

    fn value(&self, t: f64, r: f64) -> Result<f64> {
        self.jet(t, r).map(|j| j.value)
    }

    fn dt(&self, t: f64, r: f64) -> Result<f64> {
        self.jet(t, r).map(|j| j.dt)
    }

    fn dr(&self, t: f64, r: f64) -> Result<f64> {
        self.jet(t, r).map(|j| j.dr)
    }

    fn drt(&self, t: f64, r: f64) -> Result<f64> {
        self.jet(t, r).map(|j| j.drt)
    }

    fn drr(&self, t: f64, r: f64) -> Result<f64> {
        self.jet(t, r).map(|j| j.drr)
    }
}

pub type Evaluator = Arc<dyn SolutionEvaluator>;

/// Tolerance for integrals inside the solution formulas. Tight enough that
/// finite differences of solution values at step 1e-3 are not polluted.
pub const FORMULA_TOL: Tolerance = Tolerance {
    rel: 1e-13,
    abs: 1e-15,
};

/// `[P, P', P'', P''']` for `P(s) = s p(|s|)`, the odd extension of `s p(s)`.
#[inline]
pub(crate) fn odd_moment_jet(p: &RadialProfile, s: f64) -> [f64; 4] {
    let a = s.abs();
    let [p0, p1, p2, p3] = p.jet(a);
    let sign = if s < 0.0 { -1.0 } else { 1.0 };
    [s * p0, p0 + a * p1, sign * (2.0 * p1 + a * p2), 3.0 * p2 + a * p3]
}

/// `∫_lo^hi s p(s) ds` for `0 ≤ lo ≤ hi`.
pub(crate) fn moment_integral(
    p: &RadialProfile,
    lo: f64,
    hi: f64,
    extra_breaks: &[f64],
) -> Result<f64> {
    let hi = hi.min(p.support_radius());
    if !(hi > lo) {
        return Ok(0.0);
    }
    let res = QuadratureRequest::new(|s: f64| s * p.value(s), lo, hi)
        .tolerance(FORMULA_TOL)
        .breakpoints(extra_breaks.iter().copied())
        .integrate()?;
    Ok(res.value)
}

pub(crate) fn check_radius(r: f64, min_r: f64, t: f64) -> Result<()> {
    if !(r >= min_r) || !r.is_finite() {
        return Err(WaveError::Domain {
            t,
            r,
            reason: format!("radius below {min_r}"),
        });
    }
    Ok(())
}

/// Sorted, deduplicated breakpoints inside `(lo, ∞)`.
pub(crate) fn tidy_breaks(mut pts: Vec<f64>, lo: f64) -> Vec<f64> {
    pts.retain(|x| x.is_finite() && *x > lo);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_kind_parses() {
        assert_eq!("Neumann".parse::<BoundaryKind>().unwrap(), BoundaryKind::Neumann);
        assert_eq!("dirichlet".parse::<BoundaryKind>().unwrap(), BoundaryKind::Dirichlet);
        assert!("robin".parse::<BoundaryKind>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(WaveConfig::new(1.0, 1.0, 2.5).is_ok());
        assert!(WaveConfig::new(0.0, 1.0, 2.5).is_err());
        let cfg = WaveConfig::new(1.0, 1.0, 1.5).unwrap();
        assert!(cfg.check_support(1.0).is_err());
        assert!(cfg.check_support(0.5).is_ok());
    }

    #[test]
    fn config_json_keys() {
        let cfg: WaveConfig = serde_json::from_str(r#"{"c":2.0,"T":0.5,"R_out":3.0}"#).unwrap();
        assert_eq!(cfg, WaveConfig::new(2.0, 0.5, 3.0).unwrap());
    }

    #[test]
    fn reduced_jet_of_linear_u() {
        // u = r(1 + t) gives U = 1 + t
        let u = Jet {
            value: 0.5 * 1.5,
            dt: 0.5,
            dr: 1.5,
            drt: 1.0,
            drr: 0.0,
            dtt: 0.0,
        };
        let j = Jet::from_reduced(0.5, &u);
        assert!((j.value - 1.5).abs() < 1e-15);
        assert!((j.dt - 1.0).abs() < 1e-15);
        assert!(j.dr.abs() < 1e-15 && j.drt.abs() < 1e-15 && j.drr.abs() < 1e-15);
    }
}
