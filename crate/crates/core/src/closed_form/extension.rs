use std::sync::Arc;

use crate::error::{invalid, Result};

use super::{check_radius, BoundaryKind, Jet, SolutionEvaluator, WaveConfig};

/// An exterior solution continued into the ball `r < ε`: as the constant
/// boundary value (Neumann) or as zero (Dirichlet).
#[derive(Debug, Clone)]
pub struct ExtendedSolution {
    inner: Arc<dyn SolutionEvaluator>,
    eps: f64,
    kind: BoundaryKind,
}

pub fn extend(sol: Arc<dyn SolutionEvaluator>, eps: f64, kind: BoundaryKind) -> Result<ExtendedSolution> {
    if sol.domain_min_r() != eps {
        return Err(invalid(format!(
            "solution is defined on r >= {}, not r >= {eps}",
            sol.domain_min_r()
        )));
    }
    if sol.boundary_kind() != Some(kind) {
        return Err(invalid(format!(
            "cannot apply a {kind} extension to a solution with boundary condition {:?}",
            sol.boundary_kind()
        )));
    }
    Ok(ExtendedSolution { inner: sol, eps, kind })
}

impl ExtendedSolution {
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn kind(&self) -> BoundaryKind {
        self.kind
    }

    pub fn inner(&self) -> &Arc<dyn SolutionEvaluator> {
        &self.inner
    }
}

impl SolutionEvaluator for ExtendedSolution {
    fn jet(&self, t: f64, r: f64) -> Result<Jet> {
        check_radius(r, 0.0, t)?;
        if r >= self.eps {
            return self.inner.jet(t, r);
        }
        match self.kind {
            BoundaryKind::Neumann => {
                let b = self.inner.jet(t, self.eps)?;
                Ok(Jet {
                    value: b.value,
                    dt: b.dt,
                    dtt: b.dtt,
                    ..Jet::default()
                })
            }
            BoundaryKind::Dirichlet => {
                self.inner.config().check_time(t, r)?;
                Ok(Jet::default())
            }
        }
    }

    fn domain_min_r(&self) -> f64 {
        0.0
    }

    fn config(&self) -> &WaveConfig {
        self.inner.config()
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        let mut pts = self.inner.breakpoints(t);
        pts.push(self.eps);
        super::tidy_breaks(pts, 0.0)
    }

    fn boundary_kind(&self) -> Option<BoundaryKind> {
        Some(self.kind)
    }

    /// The Dirichlet extension has a kink across `r = ε`.
    fn second_order_available(&self) -> bool {
        self.kind == BoundaryKind::Neumann
    }
}
