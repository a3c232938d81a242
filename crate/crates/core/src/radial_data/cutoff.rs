//! Cutoff functions used to build exterior data.
//!
//! Both families blend across the transition interval `[1, 2]` with a
//! polynomial in `x = s - 1`:
//!
//! * β ≡ 1 on `[0, 1]`, β(s) = s for s ≥ 2, nondecreasing. Its derivative on
//!   `[1, 2]` is a smoothstep plus a nonnegative bump chosen so that β(2) = 2.
//! * χ ≡ 0 on `[0, 1]`, χ ≡ 1 on `[2, ∞)`. A plain smoothstep.
//!
//! The default `smooth9` variants match value and four derivatives at both ends
//! (C⁴). The `quintic` variants match two derivatives (C²) and are kept for
//! studying how the cutoff enters the rate constants.

use std::fmt;
use std::sync::Arc;

use super::poly::Poly;
use crate::error::{invalid, Result};

/// A cutoff profile on `[0, ∞)` with derivatives through third order.
pub trait Cutoff: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    /// `[value, d1, d2, d3]` at `s ≥ 0`.
    fn jet(&self, s: f64) -> [f64; 4];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Beta,
    Chi,
}

#[derive(Debug)]
struct PolyBlend {
    name: &'static str,
    role: Role,
    transition: Poly,
}

impl Cutoff for PolyBlend {
    fn name(&self) -> &str {
        self.name
    }

    fn jet(&self, s: f64) -> [f64; 4] {
        match self.role {
            Role::Beta => {
                if s <= 1.0 {
                    [1.0, 0.0, 0.0, 0.0]
                } else if s >= 2.0 {
                    [s, 1.0, 0.0, 0.0]
                } else {
                    let [p, d1, d2, d3] = self.transition.jet(s - 1.0);
                    [1.0 + p, d1, d2, d3]
                }
            }
            Role::Chi => {
                if s <= 1.0 {
                    [0.0; 4]
                } else if s >= 2.0 {
                    [1.0, 0.0, 0.0, 0.0]
                } else {
                    self.transition.jet(s - 1.0)
                }
            }
        }
    }
}

/// The Neumann cutoff β.
#[derive(Debug, Clone)]
pub struct CutoffBeta(Arc<dyn Cutoff>);

/// The Dirichlet cutoff χ.
#[derive(Debug, Clone)]
pub struct CutoffChi(Arc<dyn Cutoff>);

pub const CUTOFF_NAMES: [&str; 2] = ["smooth9", "quintic"];

impl CutoffBeta {
    pub fn by_name(name: &str) -> Result<Self> {
        let transition = match name {
            // β(1+x) - 1 = ∫₀ˣ [S₇(y) + 315 y⁴(1-y)⁴] dy
            "smooth9" => Poly::new(&[0.0, 0.0, 0.0, 0.0, 0.0, 70.0, -224.0, 280.0, -160.0, 35.0]),
            // β(1+x) - 1 = ∫₀ˣ [S₃(y) + 15 y²(1-y)²] dy
            "quintic" => Poly::new(&[0.0, 0.0, 0.0, 6.0, -8.0, 3.0]),
            other => return Err(invalid(format!("unknown beta cutoff '{other}'"))),
        };
        let name = CUTOFF_NAMES.iter().find(|n| **n == name).copied().unwrap_or("?");
        Ok(Self(Arc::new(PolyBlend {
            name,
            role: Role::Beta,
            transition,
        })))
    }

    pub fn from_cutoff(c: Arc<dyn Cutoff>) -> Self {
        Self(c)
    }

    pub fn name(&self) -> &str {
        self.0.name()
    }

    pub fn jet(&self, s: f64) -> [f64; 4] {
        self.0.jet(s)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.jet(s)[0]
    }

    pub fn d1(&self, s: f64) -> f64 {
        self.jet(s)[1]
    }

    pub fn d2(&self, s: f64) -> f64 {
        self.jet(s)[2]
    }
}

impl Default for CutoffBeta {
    fn default() -> Self {
        Self::by_name("smooth9").expect("builtin cutoff")
    }
}

impl CutoffChi {
    pub fn by_name(name: &str) -> Result<Self> {
        let transition = match name {
            "smooth9" => Poly::new(&[0.0, 0.0, 0.0, 0.0, 0.0, 126.0, -420.0, 540.0, -315.0, 70.0]),
            "quintic" => Poly::new(&[0.0, 0.0, 0.0, 10.0, -15.0, 6.0]),
            other => return Err(invalid(format!("unknown chi cutoff '{other}'"))),
        };
        let name = CUTOFF_NAMES.iter().find(|n| **n == name).copied().unwrap_or("?");
        Ok(Self(Arc::new(PolyBlend {
            name,
            role: Role::Chi,
            transition,
        })))
    }

    pub fn from_cutoff(c: Arc<dyn Cutoff>) -> Self {
        Self(c)
    }

    pub fn name(&self) -> &str {
        self.0.name()
    }

    pub fn jet(&self, s: f64) -> [f64; 4] {
        self.0.jet(s)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.jet(s)[0]
    }

    pub fn d1(&self, s: f64) -> f64 {
        self.jet(s)[1]
    }

    pub fn d2(&self, s: f64) -> f64 {
        self.jet(s)[2]
    }
}

impl Default for CutoffChi {
    fn default() -> Self {
        Self::by_name("smooth9").expect("builtin cutoff")
    }
}
