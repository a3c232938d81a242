use crate::error::{Result, WaveError};
use crate::quadrature::gauss_legendre;
use crate::radial_data::RadialProfile;

use super::{
    check_radius, moment_integral, odd_moment_jet, tidy_breaks, Jet, SolutionEvaluator,
    WaveConfig,
};

/// Gauss–Legendre points used for the averaged form near the origin.
const CENTER_NODES: usize = 8;

/// Whole-space radial solution with data `(φ, ψ)`.
#[derive(Debug, Clone)]
pub struct CauchySolution {
    phi: RadialProfile,
    psi: RadialProfile,
    cfg: WaveConfig,
    switch_radius: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

pub fn cauchy_solution(
    phi: &RadialProfile,
    psi: &RadialProfile,
    cfg: WaveConfig,
) -> Result<CauchySolution> {
    cfg.validate()?;
    cfg.check_support(phi.support_radius().max(psi.support_radius()))?;
    let (nodes, weights) = gauss_legendre(CENTER_NODES);
    Ok(CauchySolution {
        phi: phi.clone(),
        psi: psi.clone(),
        cfg,
        switch_radius: 1e-4 * (cfg.c * cfg.t_max).max(1.0),
        nodes,
        weights,
    })
}

/// `U(t, 0) = φ(ct) + ct φ'(ct) + t ψ(ct)`.
pub fn cauchy_center_limit(
    phi: &RadialProfile,
    psi: &RadialProfile,
    cfg: &WaveConfig,
    t: f64,
) -> Result<f64> {
    cfg.check_time(t, 0.0)?;
    let s = cfg.c * t;
    let [p0, p1, _, _] = phi.jet(s);
    Ok(p0 + s * p1 + t * psi.value(s))
}

impl CauchySolution {
    fn u_jet(&self, t: f64, r: f64) -> Result<Jet> {
        let c = self.cfg.c;
        let ct = c * t;
        let a = ct + r;
        let m = ct - r;
        let fa = odd_moment_jet(&self.phi, a);
        let fm = odd_moment_jet(&self.phi, m);
        let ga = odd_moment_jet(&self.psi, a);
        let gm = odd_moment_jet(&self.psi, m);
        // the odd part of ∫_m^a G cancels on [m, -m] when m < 0
        let integral = moment_integral(&self.psi, m.abs(), a, &[])?;
        Ok(Jet {
            value: 0.5 * (fa[0] - fm[0]) + integral / (2.0 * c),
            dr: 0.5 * (fa[1] + fm[1]) + (ga[0] + gm[0]) / (2.0 * c),
            dt: 0.5 * c * (fa[1] - fm[1]) + 0.5 * (ga[0] - gm[0]),
            drr: 0.5 * (fa[2] - fm[2]) + (ga[1] - gm[1]) / (2.0 * c),
            drt: 0.5 * c * (fa[2] + fm[2]) + 0.5 * (ga[1] + gm[1]),
            dtt: 0.5 * c * c * (fa[2] - fm[2]) + 0.5 * c * (ga[1] - gm[1]),
        })
    }

    /// `U = ½∫F'(ct + rμ)dμ + (1/2c)∫G(ct + rμ)dμ` over `μ ∈ [-1, 1]`, differentiated under the integral.
    fn averaged_jet(&self, t: f64, r: f64) -> Jet {
        let c = self.cfg.c;
        let ct = c * t;
        let mut j = Jet::default();
        for (&mu, &w) in self.nodes.iter().zip(&self.weights) {
            let s = ct + r * mu;
            let f = odd_moment_jet(&self.phi, s);
            let g = odd_moment_jet(&self.psi, s);
            j.value += w * (0.5 * f[1] + g[0] / (2.0 * c));
            j.dt += w * (0.5 * c * f[2] + 0.5 * g[1]);
            j.dr += w * mu * (0.5 * f[2] + g[1] / (2.0 * c));
            j.drt += w * mu * (0.5 * c * f[3] + 0.5 * g[2]);
            j.drr += w * mu * mu * (0.5 * f[3] + g[2] / (2.0 * c));
            j.dtt += w * (0.5 * c * c * f[3] + 0.5 * c * g[2]);
        }
        j
    }
}

impl SolutionEvaluator for CauchySolution {
    fn jet(&self, t: f64, r: f64) -> Result<Jet> {
        self.cfg.check_time(t, r)?;
        check_radius(r, 0.0, t)?;
        let j = if r < self.switch_radius {
            self.averaged_jet(t, r)
        } else {
            Jet::from_reduced(r, &self.u_jet(t, r)?)
        };
        if !j.is_finite() {
            return Err(WaveError::Evaluation { abscissa: r });
        }
        Ok(j)
    }

    fn domain_min_r(&self) -> f64 {
        0.0
    }

    fn config(&self) -> &WaveConfig {
        &self.cfg
    }

    fn breakpoints(&self, t: f64) -> Vec<f64> {
        let ct = self.cfg.c * t;
        let mut pts = vec![ct];
        for s in [self.phi.support_radius(), self.psi.support_radius()] {
            pts.extend([(ct - s).abs(), ct + s]);
        }
        tidy_breaks(pts, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial_data::{make_bump_profile, make_poly_profile};

    fn solution() -> CauchySolution {
        let phi = make_bump_profile(1.0, 1.0).unwrap();
        let psi = make_poly_profile(0.7, 0.8).unwrap();
        cauchy_solution(&phi, &psi, WaveConfig::new(1.3, 1.0, 3.0).unwrap()).unwrap()
    }

    #[test]
    fn zero_time_reproduces_data() {
        let sol = solution();
        for r in [0.0, 1e-6, 0.1, 0.45, 0.79, 0.95, 1.2] {
            let j = sol.jet(0.0, r).unwrap();
            assert!((j.value - sol.phi.value(r)).abs() < 1e-12, "r={r}");
            assert!((j.dt - sol.psi.value(r)).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn radial_wave_equation_residual() {
        let sol = solution();
        let c2 = sol.cfg.c * sol.cfg.c;
        for &(t, r) in &[(0.3, 0.2), (0.5, 0.7), (0.8, 1.4), (0.2, 1e-5), (0.9, 0.05)] {
            let j = sol.jet(t, r).unwrap();
            // ΔU = U_rr + 2U_r/r; at tiny r use the limit 3U_rr
            let lap = if r < 1e-4 { 3.0 * j.drr } else { j.drr + 2.0 * j.dr / r };
            let res = j.dtt - c2 * lap;
            assert!(res.abs() < 1e-6 * (1.0 + j.dtt.abs()), "t={t} r={r} res={res}");
        }
    }

    #[test]
    fn derivatives_agree_with_finite_differences() {
        let sol = solution();
        let h = 2.5e-4;
        // fourth-order central difference
        let d = |f: &dyn Fn(f64) -> f64| (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
        for &(t, r) in &[(0.3, 0.4), (0.6, 0.9), (0.5, 0.3)] {
            let j = sol.jet(t, r).unwrap();
            let jr = |dr: f64| sol.jet(t, r + dr).unwrap();
            let jt = |dt: f64| sol.jet(t + dt, r).unwrap();
            for (name, fd, an) in [
                ("dr", d(&|x| jr(x).value), j.dr),
                ("dt", d(&|x| jt(x).value), j.dt),
                ("drr", d(&|x| jr(x).dr), j.drr),
                ("drt", d(&|x| jt(x).dr), j.drt),
                ("dtt", d(&|x| jt(x).dt), j.dtt),
            ] {
                assert!((fd - an).abs() < 1e-7 * (1.0 + an.abs()), "{name} at ({t},{r}): {fd} vs {an}");
            }
        }
    }

    #[test]
    fn branches_agree_across_switch() {
        let sol = solution();
        let r = sol.switch_radius;
        for t in [0.1, 0.4, 0.77] {
            let inner = sol.averaged_jet(t, r);
            let outer = Jet::from_reduced(r, &sol.u_jet(t, r).unwrap());
            assert!((inner.value - outer.value).abs() < 1e-9);
            assert!((inner.dt - outer.dt).abs() < 1e-8);
            // the reduced form loses digits in second derivatives at tiny r
            assert!((inner.dr - outer.dr).abs() < 1e-4);
        }
    }

    #[test]
    fn center_limit_matches_richardson_extrapolation() {
        // U(t, r) is even in r, so U(t, r) = U0 + a r² + b r⁴ + ...
        let sol = solution();
        for t in [0.0, 0.25, 0.5, 0.7, 1.0] {
            let f = |r: f64| Jet::from_reduced(r, &sol.u_jet(t, r).unwrap()).value;
            let (r0, r1, r2) = (2e-3, 1e-3, 5e-4);
            let (f0, f1, f2) = (f(r0), f(r1), f(r2));
            // eliminate r² then r⁴ terms
            let g0 = (4.0 * f1 - f0) / 3.0;
            let g1 = (4.0 * f2 - f1) / 3.0;
            let extrap = (16.0 * g1 - g0) / 15.0;
            let exact = cauchy_center_limit(&sol.phi, &sol.psi, &sol.cfg, t).unwrap();
            assert!((exact - extrap).abs() < 1e-9, "t={t}: {exact} vs {extrap}");
            assert!((sol.value(t, 0.0).unwrap() - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn domain_errors() {
        let sol = solution();
        assert!(matches!(sol.jet(-0.1, 0.5), Err(WaveError::Domain { .. })));
        assert!(matches!(sol.jet(1.5, 0.5), Err(WaveError::Domain { .. })));
        assert!(matches!(sol.jet(0.5, -0.1), Err(WaveError::Domain { .. })));
    }

    #[test]
    fn vanishes_outside_light_cone() {
        let sol = solution();
        assert_eq!(sol.value(0.5, 1.0 + 1.3 * 0.5 + 1e-9).unwrap(), 0.0);
    }
}
