//! Leapfrog solver for the reduced problem `v_tt = c² v_rr`, `v = rU`, used as
//! an independent check on the closed-form solutions.
//!
//! The grid extends far enough to the right that nothing reflects back into
//! the region of interest before `T`, so the right end is simply held at zero.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::closed_form::WaveConfig;
use crate::error::{invalid, Result, WaveError};
use crate::radial_data::RadialProfile;

/// Left boundary of the reduced problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FdBoundary {
    /// Whole space: `v(t, 0) = 0`.
    CauchyDirichletAtZero,
    /// Exterior Neumann: `v_r = v/ε` at `r = ε`.
    RobinAtEps,
    /// Exterior Dirichlet: `v(t, ε) = 0`.
    DirichletAtEps,
}

/// Values of `v` on a uniform `(t, r)` grid.
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub r0: f64,
    pub h: f64,
    pub k: f64,
    pub cfg: WaveConfig,
    pub boundary: FdBoundary,
    nx: usize,
    levels: usize,
    values: Vec<f64>,
}

impl GridSolution {
    pub fn nodes(&self) -> usize {
        self.nx
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn level(&self, n: usize) -> &[f64] {
        &self.values[n * self.nx..(n + 1) * self.nx]
    }

    pub fn v(&self, n: usize, j: usize) -> f64 {
        self.values[n * self.nx + j]
    }

    pub fn r(&self, j: usize) -> f64 {
        self.r0 + j as f64 * self.h
    }

    /// `½Σ((vⁿ⁺¹ - vⁿ)/k)²h + ½c²Σ(Dvⁿ⁺¹)(Dvⁿ)h` with forward differences `D`, which
    /// leapfrog conserves exactly when both ends are held at zero.
    pub fn discrete_energy(&self, n: usize) -> f64 {
        let (a, b) = (self.level(n), self.level(n + 1));
        let (h, k) = (self.h, self.k);
        let c2 = self.cfg.c * self.cfg.c;
        let kinetic: f64 = a.iter().zip(b).map(|(x, y)| ((y - x) / k).powi(2)).sum();
        let potential: f64 = (0..self.nx - 1)
            .map(|j| (b[j + 1] - b[j]) * (a[j + 1] - a[j]) / (h * h))
            .sum();
        0.5 * h * (kinetic + c2 * potential)
    }

    /// One row per time level, values separated by commas.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for n in 0..self.levels {
            let row: Vec<String> = self.level(n).iter().map(|v| format!("{v:e}")).collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Largest step `T/n` with `ck/h ≤ cfl`.
pub fn cfl_step(cfg: &WaveConfig, h: f64, cfl: f64) -> f64 {
    let n = (cfg.t_max * cfg.c / (cfl * h)).ceil();
    cfg.t_max / n
}

/// Solves on `[r0, R]` with `r0 = 0` for the whole-space problem and `r0 = ε` otherwise.
/// `R` covers `R_out` and the domain of influence of the data plus two cells.
#[allow(clippy::too_many_arguments)]
pub fn solve_1d(
    phi: &RadialProfile,
    psi: &RadialProfile,
    cfg: &WaveConfig,
    eps: f64,
    boundary: FdBoundary,
    h: f64,
    k: f64,
) -> Result<GridSolution> {
    let reach = phi.support_radius().max(psi.support_radius()) + cfg.c * cfg.t_max;
    solve_1d_on(phi, psi, cfg, eps, boundary, h, k, reach.max(cfg.r_out) + 2.0 * h)
}

/// As [`solve_1d`] on an explicit interval `[r0, r_max]`.
#[allow(clippy::too_many_arguments)]
pub fn solve_1d_on(
    phi: &RadialProfile,
    psi: &RadialProfile,
    cfg: &WaveConfig,
    eps: f64,
    boundary: FdBoundary,
    h: f64,
    k: f64,
    r_max: f64,
) -> Result<GridSolution> {
    cfg.validate()?;
    if !(h > 0.0) || !(k > 0.0) {
        return Err(invalid("grid spacing and time step must be positive"));
    }
    let lambda = cfg.c * k / h;
    if lambda > 1.0 + 1e-12 {
        return Err(invalid(format!("CFL number c·k/h = {lambda} exceeds 1")));
    }
    let r0 = match boundary {
        FdBoundary::CauchyDirichletAtZero => 0.0,
        FdBoundary::RobinAtEps | FdBoundary::DirichletAtEps => {
            if !(eps > 0.0) {
                return Err(invalid(format!("eps must be positive, got {eps}")));
            }
            eps
        }
    };
    let reach = phi.support_radius().max(psi.support_radius()) + cfg.c * cfg.t_max + 2.0 * h;
    if r_max < reach {
        return Err(invalid(format!(
            "grid ends at {r_max}, before the domain of influence {reach}"
        )));
    }
    let nx = ((r_max - r0) / h).ceil() as usize + 1;
    if nx < 4 {
        return Err(invalid("grid has fewer than four nodes"));
    }
    let steps = (cfg.t_max / k - 1e-9).ceil() as usize;
    let levels = steps + 1;
    let l2 = lambda * lambda;
    let robin = match boundary {
        FdBoundary::RobinAtEps => Some(2.0 * h / eps),
        _ => None,
    };

    let mut values = vec![0.0; levels * nx];
    let r = |j: usize| r0 + j as f64 * h;
    // second difference with the left boundary folded in; the right end is zero
    let lap = |v: &[f64], j: usize| -> f64 {
        if j == 0 {
            // ghost value v₋₁ = v₁ - (2h/ε)v₀ from the centred Robin condition
            let g = robin.expect("only the Robin end is updated at j = 0");
            2.0 * v[1] - 2.0 * v[0] - g * v[0]
        } else {
            v[j + 1] - 2.0 * v[j] + v[j - 1]
        }
    };
    let first = if robin.is_some() { 0 } else { 1 };

    for (j, v) in values[..nx - 1].iter_mut().enumerate() {
        *v = r(j) * phi.value(r(j));
    }
    if robin.is_none() {
        values[0] = 0.0;
    }
    {
        let (v0, rest) = values.split_at_mut(nx);
        let v1 = &mut rest[..nx];
        for j in first..nx - 1 {
            v1[j] = v0[j] + k * r(j) * psi.value(r(j)) + 0.5 * l2 * lap(v0, j);
        }
    }
    for n in 1..steps {
        let (done, rest) = values.split_at_mut((n + 1) * nx);
        let prev = &done[(n - 1) * nx..n * nx];
        let cur = &done[n * nx..];
        let next = &mut rest[..nx];
        for j in first..nx - 1 {
            next[j] = 2.0 * cur[j] - prev[j] + l2 * lap(cur, j);
        }
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(WaveError::Evaluation { abscissa: f64::NAN });
    }
    Ok(GridSolution {
        r0,
        h,
        k,
        cfg: *cfg,
        boundary,
        nx,
        levels,
        values,
    })
}

/// `U(t, r) = v(t, r)/r` with `v` interpolated bilinearly.
pub fn sample_u(gs: &GridSolution, t: f64, r: f64) -> Result<f64> {
    let t_end = (gs.levels - 1) as f64 * gs.k;
    let r_end = gs.r(gs.nx - 1);
    if !(t >= 0.0 && t <= t_end && r >= gs.r0 && r <= r_end) || r <= 0.0 {
        return Err(WaveError::Domain {
            t,
            r,
            reason: "outside the grid".into(),
        });
    }
    let x = t / gs.k;
    let n = (x.floor() as usize).min(gs.levels - 2);
    let y = (r - gs.r0) / gs.h;
    let j = (y.floor() as usize).min(gs.nx - 2);
    let (a, b) = (x - n as f64, y - j as f64);
    let v = (1.0 - a) * ((1.0 - b) * gs.v(n, j) + b * gs.v(n, j + 1))
        + a * ((1.0 - b) * gs.v(n + 1, j) + b * gs.v(n + 1, j + 1));
    Ok(v / r)
}
