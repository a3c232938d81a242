//! Smooth compactly supported radial profiles and their cutoff modifications.
//!
//! A [`RadialProfile`] is a function of `r ≥ 0` carrying its first three
//! derivatives and a support radius beyond which it is exactly zero. The
//! concrete shapes live behind the [`ProfileShape`] trait and are looked up by
//! name through [`ProfileRegistry`]; the Neumann and Dirichlet modifications
//! are themselves shapes wrapping a base profile.

mod cutoff;
mod poly;

pub use cutoff::{Cutoff, CutoffBeta, CutoffChi, CUTOFF_NAMES};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use poly::Poly;

/// A radial function with derivatives through third order.
pub trait ProfileShape: Send + Sync + fmt::Debug {
    /// `[value, d1, d2, d3]` at `r ≥ 0`.
    fn jet(&self, r: f64) -> [f64; 4];
    /// Everything vanishes for `r` at or beyond this radius.
    fn support_radius(&self) -> f64;
}

#[derive(Debug, Clone)]
pub struct RadialProfile {
    shape: Arc<dyn ProfileShape>,
}

impl RadialProfile {
    pub fn new(shape: Arc<dyn ProfileShape>) -> Self {
        Self { shape }
    }

    /// The zero profile (a bump of zero amplitude).
    pub fn zero() -> Self {
        make_bump_profile(0.0, 1.0).expect("unit support is valid")
    }

    #[inline]
    pub fn jet(&self, r: f64) -> [f64; 4] {
        self.shape.jet(r)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.jet(r)[0]
    }

    pub fn d1(&self, r: f64) -> f64 {
        self.jet(r)[1]
    }

    pub fn d2(&self, r: f64) -> f64 {
        self.jet(r)[2]
    }

    pub fn d3(&self, r: f64) -> f64 {
        self.jet(r)[3]
    }

    pub fn support_radius(&self) -> f64 {
        self.shape.support_radius()
    }
}

/// `A·exp(1 - 1/(1 - (r/ρ)²))` for `r < ρ`, zero beyond.
#[derive(Debug, Clone, Copy)]
struct Bump {
    amplitude: f64,
    radius: f64,
}

impl ProfileShape for Bump {
    fn jet(&self, r: f64) -> [f64; 4] {
        let x = r / self.radius;
        let q = 1.0 - x * x;
        if q <= 0.0 || self.amplitude == 0.0 {
            return [0.0; 4];
        }
        let v = self.amplitude * (1.0 - 1.0 / q).exp();
        if v == 0.0 {
            return [0.0; 4];
        }
        // log-derivative L = d/dx log φ and its derivatives
        let q2 = q * q;
        let q3 = q2 * q;
        let l = -2.0 * x / q2;
        let l1 = -2.0 / q2 - 8.0 * x * x / q3;
        let l2 = -24.0 * x / q3 - 48.0 * x * x * x / (q3 * q);
        let inv = 1.0 / self.radius;
        [
            v,
            v * l * inv,
            v * (l1 + l * l) * inv * inv,
            v * (l2 + 3.0 * l * l1 + l * l * l) * inv * inv * inv,
        ]
    }

    fn support_radius(&self) -> f64 {
        self.radius
    }
}

/// `A·(1 - (r/ρ)²)⁴` for `r < ρ`: C³ across the support edge.
#[derive(Debug, Clone)]
struct PolyBump {
    amplitude: f64,
    radius: f64,
    poly: Poly,
}

impl ProfileShape for PolyBump {
    fn jet(&self, r: f64) -> [f64; 4] {
        if r >= self.radius {
            return [0.0; 4];
        }
        let [v, d1, d2, d3] = self.poly.jet(r / self.radius);
        let inv = 1.0 / self.radius;
        let a = self.amplitude;
        [a * v, a * d1 * inv, a * d2 * inv * inv, a * d3 * inv * inv * inv]
    }

    fn support_radius(&self) -> f64 {
        self.radius
    }
}

fn check_support(support_radius: f64) -> Result<()> {
    if !(support_radius > 0.0) || !support_radius.is_finite() {
        return Err(invalid(format!(
            "support radius must be positive, got {support_radius}"
        )));
    }
    Ok(())
}

/// The standard mollifier shape scaled to `support_radius`, with `value(0) = amplitude`.
pub fn make_bump_profile(amplitude: f64, support_radius: f64) -> Result<RadialProfile> {
    check_support(support_radius)?;
    if !amplitude.is_finite() {
        return Err(invalid("amplitude must be finite"));
    }
    Ok(RadialProfile::new(Arc::new(Bump {
        amplitude,
        radius: support_radius,
    })))
}

/// Polynomial bump `A(1 - (r/ρ)²)⁴`.
pub fn make_poly_profile(amplitude: f64, support_radius: f64) -> Result<RadialProfile> {
    check_support(support_radius)?;
    if !amplitude.is_finite() {
        return Err(invalid("amplitude must be finite"));
    }
    Ok(RadialProfile::new(Arc::new(PolyBump {
        amplitude,
        radius: support_radius,
        poly: Poly::new(&[1.0, 0.0, -4.0, 0.0, 6.0, 0.0, -4.0, 0.0, 1.0]),
    })))
}

/// Serializable description of a profile: `{"kind":"bump","amplitude":A,"support_radius":R}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub kind: String,
    pub amplitude: f64,
    pub support_radius: f64,
}

impl ProfileSpec {
    pub fn bump(amplitude: f64, support_radius: f64) -> Self {
        Self {
            kind: "bump".into(),
            amplitude,
            support_radius,
        }
    }

    pub fn build(&self) -> Result<RadialProfile> {
        ProfileRegistry::builtin().build(self)
    }
}

type ProfileCtor = fn(f64, f64) -> Result<RadialProfile>;

/// Profile constructors keyed by kind name.
#[derive(Clone)]
pub struct ProfileRegistry {
    ctors: BTreeMap<String, ProfileCtor>,
}

impl ProfileRegistry {
    pub fn empty() -> Self {
        Self {
            ctors: BTreeMap::new(),
        }
    }

    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        reg.register("bump", make_bump_profile);
        reg.register("poly", make_poly_profile);
        reg
    }

    pub fn register(&mut self, kind: &str, ctor: ProfileCtor) {
        self.ctors.insert(kind.to_string(), ctor);
    }

    pub fn kinds(&self) -> impl Iterator<Item = &str> {
        self.ctors.keys().map(String::as_str)
    }

    pub fn build(&self, spec: &ProfileSpec) -> Result<RadialProfile> {
        let ctor = self
            .ctors
            .get(&spec.kind)
            .ok_or_else(|| invalid(format!("unknown profile kind '{}'", spec.kind)))?;
        ctor(spec.amplitude, spec.support_radius)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid(format!("eps must be positive, got {eps}")));
    }
    Ok(())
}

/// `r ↦ P(ε β(r/ε))`.
#[derive(Debug)]
struct NeumannModified {
    base: RadialProfile,
    eps: f64,
    beta: CutoffBeta,
}

impl ProfileShape for NeumannModified {
    fn jet(&self, r: f64) -> [f64; 4] {
        let eps = self.eps;
        if r >= 2.0 * eps {
            return self.base.jet(r);
        }
        if r <= eps {
            return [self.base.value(eps), 0.0, 0.0, 0.0];
        }
        let [b0, b1, b2, b3] = self.beta.jet(r / eps);
        // g(r) = ε β(r/ε)
        let g = eps * b0;
        let (g1, g2, g3) = (b1, b2 / eps, b3 / (eps * eps));
        let [p0, p1, p2, p3] = self.base.jet(g);
        [
            p0,
            p1 * g1,
            p2 * g1 * g1 + p1 * g2,
            p3 * g1 * g1 * g1 + 3.0 * p2 * g1 * g2 + p1 * g3,
        ]
    }

    fn support_radius(&self) -> f64 {
        self.base.support_radius().max(2.0 * self.eps)
    }
}

/// `r ↦ χ(r/ε) P(r)`.
#[derive(Debug)]
struct DirichletModified {
    base: RadialProfile,
    eps: f64,
    chi: CutoffChi,
}

impl ProfileShape for DirichletModified {
    fn jet(&self, r: f64) -> [f64; 4] {
        let eps = self.eps;
        if r >= 2.0 * eps {
            return self.base.jet(r);
        }
        if r <= eps {
            return [0.0; 4];
        }
        let [c0, c1, c2, c3] = self.chi.jet(r / eps);
        let (c1, c2, c3) = (c1 / eps, c2 / (eps * eps), c3 / (eps * eps * eps));
        let [p0, p1, p2, p3] = self.base.jet(r);
        [
            c0 * p0,
            c1 * p0 + c0 * p1,
            c2 * p0 + 2.0 * c1 * p1 + c0 * p2,
            c3 * p0 + 3.0 * c2 * p1 + 3.0 * c1 * p2 + c0 * p3,
        ]
    }

    fn support_radius(&self) -> f64 {
        self.base.support_radius()
    }
}

/// Neumann data with the default β.
pub fn neumann_data(profile: &RadialProfile, eps: f64) -> Result<RadialProfile> {
    neumann_data_with(profile, eps, &CutoffBeta::default())
}

pub fn neumann_data_with(
    profile: &RadialProfile,
    eps: f64,
    beta: &CutoffBeta,
) -> Result<RadialProfile> {
    check_eps(eps)?;
    Ok(RadialProfile::new(Arc::new(NeumannModified {
        base: profile.clone(),
        eps,
        beta: beta.clone(),
    })))
}

/// Dirichlet data with the default χ.
pub fn dirichlet_data(profile: &RadialProfile, eps: f64) -> Result<RadialProfile> {
    dirichlet_data_with(profile, eps, &CutoffChi::default())
}

pub fn dirichlet_data_with(
    profile: &RadialProfile,
    eps: f64,
    chi: &CutoffChi,
) -> Result<RadialProfile> {
    check_eps(eps)?;
    Ok(RadialProfile::new(Arc::new(DirichletModified {
        base: profile.clone(),
        eps,
        chi: chi.clone(),
    })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bump() -> RadialProfile {
        make_bump_profile(1.0, 1.0).unwrap()
    }

    /// Fourth-order central difference of `f` at `x`.
    fn fd4(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
        (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
    }

    #[test]
    fn bump_basic_values() {
        let p = bump();
        assert_eq!(p.value(1.5), 0.0);
        assert_eq!(p.value(1.0), 0.0);
        assert_eq!(p.value(0.0), 1.0);
        assert_eq!(p.d1(0.0), 0.0);
        assert!(p.jet(0.9999).iter().all(|v| v.is_finite()));
        assert!(p.jet(1.0 - 1e-9).iter().all(|v| v.is_finite()));
    }

    #[test]
    fn bump_second_derivative_against_fd_oracle() {
        let p = bump();
        let d1 = |r: f64| p.d1(r);
        let val = |r: f64| p.value(r);
        // d2 from FD of d1, and the second difference of value
        let fd_from_d1 = fd4(&d1, 0.5, 1e-4);
        let h: f64 = 1e-4;
        let fd_second = (-val(0.5 + 2.0 * h) + 16.0 * val(0.5 + h) - 30.0 * val(0.5)
            + 16.0 * val(0.5 - h)
            - val(0.5 - 2.0 * h))
            / (12.0 * h * h);
        assert!((fd_second - p.d2(0.5)).abs() < 1e-6 * p.d2(0.5).abs().max(1.0) + 1e-6);
        assert!((fd_from_d1 - p.d2(0.5)).abs() < 1e-9);
    }

    #[test]
    fn bad_arguments() {
        assert!(make_bump_profile(1.0, 0.0).is_err());
        assert!(make_bump_profile(1.0, -1.0).is_err());
        assert!(neumann_data(&bump(), 0.0).is_err());
        assert!(dirichlet_data(&bump(), -0.1).is_err());
    }

    #[test]
    fn neumann_examples() {
        let p = bump();
        let n = neumann_data(&p, 0.1).unwrap();
        assert_eq!(n.value(0.05), p.value(0.1));
        assert_eq!(n.value(0.3), p.value(0.3));
        assert_eq!(n.d1(0.05), 0.0);
        assert_eq!(n.jet(0.2), p.jet(0.2));
    }

    #[test]
    fn dirichlet_examples() {
        let p = bump();
        let d = dirichlet_data(&p, 0.1).unwrap();
        assert_eq!(d.value(0.07), 0.0);
        assert_eq!(d.value(0.5), p.value(0.5));
        assert_eq!(d.d1(0.1), 0.0);
        assert_eq!(d.value(0.1), 0.0);
    }

    #[test]
    fn robin_compatibility_of_neumann_data() {
        // d/dr (r φ^ε) = φ^ε / ε · ε at r = ε, i.e. u_r = u/ε for u = r φ^ε
        let p = bump();
        for eps in [0.2, 0.1, 0.05] {
            let n = neumann_data(&p, eps).unwrap();
            let u = eps * n.value(eps);
            let ur = n.value(eps) + eps * n.d1(eps);
            assert!((ur - u / eps).abs() < 1e-15);
        }
    }

    #[test]
    fn derivatives_match_finite_differences_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let base = bump();
        let profiles = vec![
            base.clone(),
            make_poly_profile(0.7, 0.8).unwrap(),
            neumann_data(&base, 0.1).unwrap(),
            dirichlet_data(&base, 0.1).unwrap(),
            neumann_data_with(&base, 0.15, &CutoffBeta::by_name("quintic").unwrap()).unwrap(),
        ];
        let h = 1e-4;
        for p in &profiles {
            for _ in 0..100 {
                let r: f64 = rng.gen_range(0.0..1.2);
                let j = p.jet(r);
                for k in 0..3 {
                    let f = |x: f64| p.jet(x.abs())[k];
                    let fd = (f(r + h) - f(r - h)) / (2.0 * h);
                    // O(h²) with generous constant: cutoff transitions have large d3/d4
                    let scale = 1.0 + j[k + 1].abs();
                    assert!(
                        (fd - j[k + 1]).abs() < 2e-3 * scale,
                        "k={k} r={r} fd={fd} analytic={}",
                        j[k + 1]
                    );
                }
            }
        }
    }

    #[test]
    fn registry_builds_by_name() {
        let reg = ProfileRegistry::builtin();
        assert_eq!(reg.kinds().collect::<Vec<_>>(), vec!["bump", "poly"]);
        let p = reg.build(&ProfileSpec::bump(2.0, 1.5)).unwrap();
        assert_eq!(p.value(0.0), 2.0);
        assert_eq!(p.support_radius(), 1.5);
        let bad = ProfileSpec {
            kind: "gaussian".into(),
            amplitude: 1.0,
            support_radius: 1.0,
        };
        assert!(reg.build(&bad).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn modified_data_agrees_beyond_two_eps(eps in 0.01f64..0.3, frac in 0.0f64..1.0) {
                let p = bump();
                let r = 2.0 * eps + frac * (1.2 - 2.0 * eps);
                let n = neumann_data(&p, eps).unwrap();
                let d = dirichlet_data(&p, eps).unwrap();
                prop_assert_eq!(n.jet(r), p.jet(r));
                prop_assert_eq!(d.jet(r), p.jet(r));
            }

            #[test]
            fn dirichlet_data_vanishes_at_eps(eps in 0.01f64..0.3) {
                let d = dirichlet_data(&bump(), eps).unwrap();
                prop_assert_eq!(d.value(eps), 0.0);
                prop_assert_eq!(d.d1(eps), 0.0);
            }

            #[test]
            fn nested_eps_agree_on_common_region(e2 in 0.01f64..0.1, scale in 1.0f64..3.0, frac in 0.0f64..1.0) {
                let e1 = e2 * scale;
                let p = bump();
                let r = 2.0 * e1 + frac;
                prop_assert_eq!(neumann_data(&p, e2).unwrap().jet(r), neumann_data(&p, e1).unwrap().jet(r));
            }

            #[test]
            fn profile_is_zero_outside_support(eps in 0.01f64..0.3, r in 0.0f64..5.0) {
                let n = neumann_data(&bump(), eps).unwrap();
                if r >= n.support_radius() {
                    prop_assert_eq!(n.jet(r), [0.0; 4]);
                }
            }
        }
    }
}
