//! Pieces shared by the exterior solutions: data `P(s) = sφ^ε(s)`,
//! `g(s) = sψ^ε(s)` on `s ≥ ε`, the reflected d'Alembert part, and the
//! exponentially weighted Robin integral.

use crate::error::{invalid, Result};
use crate::quadrature::QuadratureRequest;
use crate::radial_data::RadialProfile;

use super::{moment_integral, odd_moment_jet, tidy_breaks, Jet, WaveConfig, FORMULA_TOL};

/// Beyond this many layer widths below the upper limit the weight `e^{(s-b)/ε}` is below 1e-19.
const LAYER_CUTOFF: f64 = 44.0;

#[derive(Debug, Clone)]
pub(crate) struct ExteriorData {
    pub phi: RadialProfile,
    pub psi: RadialProfile,
    pub cfg: WaveConfig,
    pub eps: f64,
}

impl ExteriorData {
    pub fn new(phi: &RadialProfile, psi: &RadialProfile, cfg: WaveConfig, eps: f64) -> Result<Self> {
        cfg.validate()?;
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(invalid(format!("eps must be positive, got {eps}")));
        }
        cfg.check_support(phi.support_radius().max(psi.support_radius()))?;
        Ok(Self {
            phi: phi.clone(),
            psi: psi.clone(),
            cfg,
            eps,
        })
    }

    pub fn support(&self) -> f64 {
        self.phi.support_radius().max(self.psi.support_radius())
    }

    fn feature_points(&self) -> [f64; 4] {
        let e = self.eps;
        [e, 2.0 * e, self.phi.support_radius(), self.psi.support_radius()]
    }

    pub fn p(&self, s: f64) -> [f64; 4] {
        odd_moment_jet(&self.phi, s)
    }

    pub fn g(&self, s: f64) -> [f64; 4] {
        odd_moment_jet(&self.psi, s)
    }

    /// `h = g/c + P'` and `h'`.
    pub fn h(&self, s: f64) -> (f64, f64) {
        let c = self.cfg.c;
        let p = self.p(s);
        let g = self.g(s);
        (g[0] / c + p[1], g[1] / c + p[2])
    }

    /// `∫_lo^hi g(s) ds`.
    pub fn g_integral(&self, lo: f64, hi: f64) -> Result<f64> {
        moment_integral(&self.psi, lo, hi, &self.feature_points())
    }

    /// In the reflected region `ε ≤ r ≤ ct + ε`: returns `b = ct + 2ε - r` and the jet of
    /// `½[P(a) - P(b)] + (1/2c)∫_b^a g`, `a = ct + r`.
    pub fn reflected(&self, t: f64, r: f64) -> Result<(f64, Jet)> {
        let c = self.cfg.c;
        let ct = c * t;
        let a = ct + r;
        let b = ct + (2.0 * self.eps - r);
        let pa = self.p(a);
        let pb = self.p(b);
        let ga = self.g(a);
        let gb = self.g(b);
        let integral = if a > b { self.g_integral(b, a)? } else { 0.0 };
        let u = Jet {
            value: 0.5 * (pa[0] - pb[0]) + integral / (2.0 * c),
            dr: 0.5 * (pa[1] + pb[1]) + (ga[0] + gb[0]) / (2.0 * c),
            dt: 0.5 * c * (pa[1] - pb[1]) + 0.5 * (ga[0] - gb[0]),
            drr: 0.5 * (pa[2] - pb[2]) + (ga[1] - gb[1]) / (2.0 * c),
            drt: 0.5 * c * (pa[2] + pb[2]) + 0.5 * (ga[1] + gb[1]),
            dtt: 0.5 * c * c * (pa[2] - pb[2]) + 0.5 * c * (ga[1] - gb[1]),
        };
        Ok((b, u))
    }

    /// Outside the reflected region, `r ≥ ct + ε`: plain d'Alembert with `d = r - ct ≥ ε`.
    pub fn direct(&self, t: f64, r: f64) -> Result<Jet> {
        let c = self.cfg.c;
        let ct = c * t;
        let a = r + ct;
        let d = r - ct;
        let pa = self.p(a);
        let pd = self.p(d);
        let ga = self.g(a);
        let gd = self.g(d);
        let integral = self.g_integral(d, a)?;
        Ok(Jet {
            value: 0.5 * (pa[0] + pd[0]) + integral / (2.0 * c),
            dr: 0.5 * (pa[1] + pd[1]) + (ga[0] - gd[0]) / (2.0 * c),
            dt: 0.5 * c * (pa[1] - pd[1]) + 0.5 * (ga[0] + gd[0]),
            drr: 0.5 * (pa[2] + pd[2]) + (ga[1] - gd[1]) / (2.0 * c),
            drt: 0.5 * c * (pa[2] - pd[2]) + 0.5 * (ga[1] + gd[1]),
            dtt: 0.5 * c * c * (pa[2] + pd[2]) + 0.5 * c * (ga[1] - gd[1]),
        })
    }

    /// `K(b) = P(ε)e^{(ε-b)/ε} + ∫_ε^b h(s) e^{(s-b)/ε} ds`, every exponent nonpositive.
    pub fn robin_integral(&self, b: f64) -> Result<f64> {
        let eps = self.eps;
        let boundary = self.p(eps)[0] * ((eps - b) / eps).exp();
        let lo = eps.max(b - LAYER_CUTOFF * eps);
        let hi = b.min(self.support());
        if !(hi > lo) {
            return Ok(boundary);
        }
        let f = |s: f64| self.h(s).0 * ((s - b) / eps).exp();
        let res = QuadratureRequest::new(f, lo, hi)
            .tolerance(FORMULA_TOL)
            .layer_hint(b, eps)
            .breakpoints(self.feature_points())
            .integrate()?;
        Ok(boundary + res.value)
    }

    /// Characteristic seams and images of data features at time `t`.
    pub fn breakpoints(&self, t: f64) -> Vec<f64> {
        let ct = self.cfg.c * t;
        let eps = self.eps;
        let mut pts = vec![2.0 * eps, ct, ct + eps];
        for s in self.feature_points() {
            pts.extend([s - ct, ct + 2.0 * eps - s, ct + s]);
        }
        tidy_breaks(pts, eps)
    }
}
