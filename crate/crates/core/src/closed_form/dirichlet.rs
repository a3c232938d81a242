use crate::error::{Result, WaveError};
use crate::radial_data::RadialProfile;

use super::reflect::ExteriorData;
use super::{check_radius, BoundaryKind, Jet, SolutionEvaluator, WaveConfig};

/// Radial solution on `r ≥ ε` vanishing on `r = ε`: odd reflection of `u = rU` about `r = ε`.
#[derive(Debug, Clone)]
pub struct DirichletSolution {
    data: ExteriorData,
}

/// Expects the modified data `(φ^ε, ψ^ε)`, which vanish near `r = ε`.
pub fn dirichlet_solution(
    phi_eps: &RadialProfile,
    psi_eps: &RadialProfile,
    cfg: WaveConfig,
    eps: f64,
) -> Result<DirichletSolution> {
    Ok(DirichletSolution {
        data: ExteriorData::new(phi_eps, psi_eps, cfg, eps)?,
    })
}

/// `∂_r U(t, ε) = (1/ε)[φ^ε(B) + Bφ^ε'(B)] + (B/(cε))ψ^ε(B)` with `B = ct + ε`.
pub fn dirichlet_boundary_dr(
    phi_eps: &RadialProfile,
    psi_eps: &RadialProfile,
    cfg: &WaveConfig,
    eps: f64,
    t: f64,
) -> Result<f64> {
    cfg.check_time(t, eps)?;
    let big = cfg.c * t + eps;
    let [f0, f1, _, _] = phi_eps.jet(big);
    Ok((f0 + big * f1) / eps + big * psi_eps.value(big) / (cfg.c * eps))
}

impl DirichletSolution {
    pub fn eps(&self) -> f64 {
        self.data.eps
    }
}

impl SolutionEvaluator for DirichletSolution {
    fn jet(&self, t: f64, r: f64) -> Result<Jet> {
        let cfg = &self.data.cfg;
        cfg.check_time(t, r)?;
        check_radius(r, self.data.eps, t)?;
        // at r = ε the two bracket terms coincide and the integral is empty, so U = U_t = 0 exactly
        let u = if r <= cfg.c * t + self.data.eps {
            self.data.reflected(t, r)?.1
        } else {
            self.data.direct(t, r)?
        };
        let j = Jet::from_reduced(r, &u);
        if !j.is_finite() {
            return Err(WaveError::Evaluation { abscissa: r });
        }
        Ok(j)
    }

    fn domain_min_r(&self) -> f64 {
        self.data.eps
    }

    fn config(&self) -> &WaveConfig {
        &self.data.cfg
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        self.data.breakpoints(t)
    }

    fn boundary_kind(&self) -> Option<BoundaryKind> {
        Some(BoundaryKind::Dirichlet)
    }
}
