use crate::error::{Result, WaveError};
use crate::radial_data::RadialProfile;

use super::reflect::ExteriorData;
use super::{check_radius, BoundaryKind, Jet, SolutionEvaluator, WaveConfig};

/// Radial solution on `r ≥ ε` with `∂_r U = 0` on `r = ε`.
///
/// In `u = rU` the boundary condition becomes the Robin condition
/// `u_r = u/ε`, whose reflection produces the exponentially weighted term
/// `K(b) = P(ε)e^{(ε-b)/ε} + ∫_ε^b h(s)e^{(s-b)/ε} ds`, `h = g/c + P'`.
#[derive(Debug, Clone)]
pub struct NeumannSolution {
    data: ExteriorData,
}

/// Expects the modified data `(φ^ε, ψ^ε)`, which satisfy the boundary condition.
pub fn neumann_solution(
    phi_eps: &RadialProfile,
    psi_eps: &RadialProfile,
    cfg: WaveConfig,
    eps: f64,
) -> Result<NeumannSolution> {
    Ok(NeumannSolution {
        data: ExteriorData::new(phi_eps, psi_eps, cfg, eps)?,
    })
}

impl NeumannSolution {
    pub fn eps(&self) -> f64 {
        self.data.eps
    }

    fn reflected_jet(&self, t: f64, r: f64) -> Result<Jet> {
        let c = self.data.cfg.c;
        let eps = self.data.eps;
        let (b, mut u) = self.data.reflected(t, r)?;
        let k = self.data.robin_integral(b)?;
        let (h, h1) = self.data.h(b);
        // b decreases with r and increases with t
        let k_r = -h + k / eps;
        let k_t = c * (h - k / eps);
        u.value += k;
        u.dr += k_r;
        u.dt += k_t;
        u.drr += h1 + k_r / eps;
        u.drt += -c * h1 + k_t / eps;
        u.dtt += c * c * h1 - (c / eps) * k_t;
        Ok(Jet::from_reduced(r, &u))
    }

    fn boundary_jet(&self, t: f64) -> Result<Jet> {
        let tr = self.data.neumann_trace(t)?;
        let c = self.data.cfg.c;
        Ok(Jet {
            value: tr.value,
            dt: tr.dt,
            dr: 0.0,
            drt: 0.0,
            drr: tr.drr,
            dtt: c * c * tr.drr,
        })
    }
}

impl SolutionEvaluator for NeumannSolution {
    fn jet(&self, t: f64, r: f64) -> Result<Jet> {
        let cfg = &self.data.cfg;
        cfg.check_time(t, r)?;
        check_radius(r, self.data.eps, t)?;
        let j = if r == self.data.eps {
            self.boundary_jet(t)?
        } else if r <= cfg.c * t + self.data.eps {
            self.reflected_jet(t, r)?
        } else {
            Jet::from_reduced(r, &self.data.direct(t, r)?)
        };
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
        Some(BoundaryKind::Neumann)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::{neumann_boundary_trace, q_functional, q_functional_direct};
    use crate::quadrature::Tolerance;
    use crate::radial_data::{make_bump_profile, make_poly_profile, neumann_data};

    fn setup(eps: f64) -> (RadialProfile, RadialProfile, WaveConfig) {
        let phi = make_bump_profile(1.0, 1.0).unwrap();
        let psi = make_poly_profile(0.6, 0.9).unwrap();
        (
            neumann_data(&phi, eps).unwrap(),
            neumann_data(&psi, eps).unwrap(),
            WaveConfig::new(1.2, 1.0, 2.5).unwrap(),
        )
    }

    fn solution(eps: f64) -> NeumannSolution {
        let (p, q, cfg) = setup(eps);
        neumann_solution(&p, &q, cfg, eps).unwrap()
    }

    #[test]
    fn zero_time_reproduces_data() {
        let eps = 0.1;
        let sol = solution(eps);
        let (p, q, _) = setup(eps);
        for r in [eps, 0.13, 0.2, 0.35, 0.8, 1.1] {
            let j = sol.jet(0.0, r).unwrap();
            assert!((j.value - p.value(r)).abs() < 1e-12, "r={r}");
            assert!((j.dt - q.value(r)).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn boundary_derivative_is_exactly_zero() {
        let sol = solution(0.05);
        for t in [0.0, 0.1, 0.33, 0.9, 1.0] {
            let j = sol.jet(t, 0.05).unwrap();
            assert_eq!(j.dr, 0.0);
            assert_eq!(j.drt, 0.0);
        }
    }

    #[test]
    fn boundary_derivative_from_one_sided_differences() {
        let eps = 0.1;
        let sol = solution(eps);
        let h = 1e-5;
        for t in [0.2, 0.5, 0.8] {
            let v = |r: f64| sol.value(t, r).unwrap();
            let fd = (-3.0 * v(eps) + 4.0 * v(eps + h) - v(eps + 2.0 * h)) / (2.0 * h);
            assert!(fd.abs() < 1e-6, "t={t}: {fd}");
        }
    }

    #[test]
    fn boundary_trace_matches_interior_limit() {
        // the trace formulas against the first-branch formulas evaluated just off the boundary
        let eps = 0.08;
        let sol = solution(eps);
        for t in [0.05, 0.3, 0.6, 0.95] {
            let on = sol.jet(t, eps).unwrap();
            let off = sol.reflected_jet(t, eps * (1.0 + 1e-7)).unwrap();
            assert!((on.value - off.value).abs() < 1e-6 * (1.0 + on.value.abs()));
            assert!((on.dt - off.dt).abs() < 1e-5 * (1.0 + on.dt.abs()));
            assert!((on.drr - off.drr).abs() < 1e-4 * (1.0 + on.drr.abs()), "t={t}: {} vs {}", on.drr, off.drr);
        }
    }

    #[test]
    fn boundary_drr_matches_finite_differences() {
        // U_r(ε) = 0, so U(ε + h) - U(ε) ≈ ½h²U_rr + h³U_rrr/6
        let eps = 0.1;
        let sol = solution(eps);
        let h = 1e-4;
        for t in [0.1, 0.4, 0.7] {
            let v = |r: f64| sol.value(t, r).unwrap();
            // second-order one-sided stencil for U_rr
            let fd = (2.0 * v(eps) - 5.0 * v(eps + h) + 4.0 * v(eps + 2.0 * h) - v(eps + 3.0 * h)) / (h * h);
            let an = sol.drr(t, eps).unwrap();
            assert!((fd - an).abs() < 1e-4 * (1.0 + an.abs()), "t={t}: {fd} vs {an}");
        }
    }

    #[test]
    fn seam_continuity() {
        let eps = 0.1;
        let sol = solution(eps);
        for t in [0.2, 0.5, 0.9] {
            let seam = 1.2 * t + eps;
            let a = sol.jet(t, seam - 1e-9).unwrap();
            let b = sol.jet(t, seam + 1e-9).unwrap();
            // remove the first-order change across the 2e-9 gap, leaving any jump
            assert!((a.value - b.value + 2e-9 * a.dr).abs() < 1e-8);
            assert!((a.dt - b.dt + 2e-9 * a.drt).abs() < 1e-8);
        }
    }

    #[test]
    fn trace_at_time_zero() {
        let eps = 0.1;
        let (p, q, cfg) = setup(eps);
        let tr = neumann_boundary_trace(&p, &q, &cfg, eps, 0.0).unwrap();
        assert!((tr.value - p.value(eps)).abs() < 1e-14);
        for k in [1.0, 2.0, 3.0, 2.5] {
            let qk = q_functional(&p, &q, &cfg, eps, k, 0.0).unwrap();
            let expect = eps.powf(1.0 - k) * p.value(eps);
            assert!((qk - expect).abs() < 1e-12 * expect.abs());
        }
    }

    #[test]
    fn q_matches_direct_definition() {
        let eps = 0.05;
        let phi = make_bump_profile(1.0, 1.0).unwrap();
        let (p, q) = (neumann_data(&phi, eps).unwrap(), RadialProfile::zero());
        let cfg = WaveConfig::new(1.0, 1.0, 2.5).unwrap();
        let folded = q_functional(&p, &q, &cfg, eps, 3.0, 0.5).unwrap();
        let direct = q_functional_direct(&p, &q, &cfg, eps, 3.0, 0.5, Tolerance::new(1e-15, 1e-18)).unwrap();
        assert!((folded - direct).abs() < 1e-8 * direct.abs(), "{folded} vs {direct}");
    }

    #[test]
    fn q_with_velocity_matches_direct_definition() {
        let eps = 0.1;
        let (p, q, cfg) = setup(eps);
        for t in [0.2, 0.6] {
            let folded = q_functional(&p, &q, &cfg, eps, 2.0, t).unwrap();
            let direct = q_functional_direct(&p, &q, &cfg, eps, 2.0, t, Tolerance::new(1e-15, 1e-18)).unwrap();
            assert!((folded - direct).abs() < 1e-8 * direct.abs().max(1e-3));
        }
    }

    #[test]
    fn small_eps_is_finite() {
        let sol = solution(1e-3);
        for t in [0.0, 0.5, 1.0] {
            for r in [1e-3, 2e-3, 0.3, 1.0] {
                assert!(sol.jet(t, r).unwrap().is_finite());
            }
        }
    }

    #[test]
    fn below_boundary_is_domain_error() {
        let sol = solution(0.1);
        assert!(matches!(sol.jet(0.5, 0.09), Err(WaveError::Domain { .. })));
    }
}
