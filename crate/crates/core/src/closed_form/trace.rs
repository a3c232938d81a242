use serde::Serialize;

use crate::error::Result;
use crate::quadrature::{QuadratureRequest, Tolerance};
use crate::radial_data::RadialProfile;

use super::reflect::ExteriorData;
use super::WaveConfig;

/// Neumann solution on the sphere `r = ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryTrace {
    pub value: f64,
    pub dt: f64,
    pub drr: f64,
}

impl ExteriorData {
    /// Boundary trace from `K(ct + ε)`, where `Q_k = ε^{-k} K(ct + ε)`.
    pub(crate) fn neumann_trace(&self, t: f64) -> Result<BoundaryTrace> {
        let c = self.cfg.c;
        let eps = self.eps;
        let ct = c * t;
        let big = ct + eps;
        let k = self.robin_integral(big)?;
        let (q1, q2, q3) = (k / eps, k / (eps * eps), k / (eps * eps * eps));
        let [f0, f1, f2, _] = self.phi.jet(big);
        let [g0, g1, _, _] = self.psi.jet(big);
        let dt = (c / eps) * (f0 + big * f1 + big * g0 / c) - c * q2;
        let drr = q3
            - (f0 + (ct - eps) * f1 - eps * big * f2) / (eps * eps)
            - (ct * g0 - eps * big * g1) / (c * eps * eps);
        Ok(BoundaryTrace { value: q1, dt, drr })
    }

    fn q(&self, k: f64, t: f64) -> Result<f64> {
        let b = self.cfg.c * t + self.eps;
        Ok(self.robin_integral(b)? * self.eps.powf(-k))
    }
}

/// Value, time derivative and second radial derivative of the Neumann solution at `r = ε`.
/// Takes the already modified Neumann data.
pub fn neumann_boundary_trace(
    phi_eps: &RadialProfile,
    psi_eps: &RadialProfile,
    cfg: &WaveConfig,
    eps: f64,
    t: f64,
) -> Result<BoundaryTrace> {
    let data = ExteriorData::new(phi_eps, psi_eps, *cfg, eps)?;
    cfg.check_time(t, eps)?;
    data.neumann_trace(t)
}

/// `Q_k(t) = ε^{-k}[e^{-(ct+ε)/ε}∫_ε^{ct+ε}(sψ^ε/c - sφ^ε/ε)e^{s/ε}ds + (ct+ε)φ^ε(ct+ε)]`,
/// evaluated after integrating the φ^ε term by parts so that no exponent is positive.
pub fn q_functional(
    phi_eps: &RadialProfile,
    psi_eps: &RadialProfile,
    cfg: &WaveConfig,
    eps: f64,
    k: f64,
    t: f64,
) -> Result<f64> {
    let data = ExteriorData::new(phi_eps, psi_eps, *cfg, eps)?;
    cfg.check_time(t, eps)?;
    data.q(k, t)
}

/// `Q_k` straight from its definition, with the raw weight `e^{(s-ct-ε)/ε}` and the
/// boundary term added last. Suffers cancellation for small ε; kept as a cross-check.
pub fn q_functional_direct(
    phi_eps: &RadialProfile,
    psi_eps: &RadialProfile,
    cfg: &WaveConfig,
    eps: f64,
    k: f64,
    t: f64,
    tol: Tolerance,
) -> Result<f64> {
    cfg.check_time(t, eps)?;
    let c = cfg.c;
    let big = c * t + eps;
    let f = |s: f64| (s * psi_eps.value(s) / c - s * phi_eps.value(s) / eps) * ((s - big) / eps).exp();
    let integral = if big > eps {
        QuadratureRequest::new(f, eps, big)
            .tolerance(tol)
            .breakpoints([2.0 * eps, phi_eps.support_radius(), psi_eps.support_radius()])
            .integrate()?
            .value
    } else {
        0.0
    };
    Ok((integral + big * phi_eps.value(big)) * eps.powf(-k))
}
