use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::closed_form::WaveConfig;
use crate::error::{Result, WaveError};
use crate::quadrature::Tolerance;
use crate::radial_data::{ProfileSpec, RadialProfile, CUTOFF_NAMES};

pub const DEFAULT_TIME_SAMPLES: usize = 33;
pub const DEFAULT_EPS_LIST: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

fn default_cutoff() -> String {
    CUTOFF_NAMES[0].to_string()
}

/// Sweep configuration as read from JSON.
///
/// ```json
/// {"c": 1, "T": 1, "R_out": 2,
///  "phi": {"kind": "bump", "amplitude": 1, "support_radius": 1},
///  "psi": {"kind": "bump", "amplitude": 0.5, "support_radius": 1},
///  "eps_list": [0.2, 0.1, 0.05, 0.025], "time_samples": 33}
/// ```
///
/// `tolerances` (`{"rel": .., "abs": ..}`) and `cutoff` are optional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub c: f64,
    #[serde(rename = "T")]
    pub t_max: f64,
    #[serde(rename = "R_out")]
    pub r_out: f64,
    pub phi: ProfileSpec,
    pub psi: ProfileSpec,
    pub eps_list: Vec<f64>,
    pub time_samples: usize,
    #[serde(default)]
    pub tolerances: Tolerance,
    /// Name of the cutoff family used to build the modified data.
    #[serde(default = "default_cutoff")]
    pub cutoff: String,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            c: 1.0,
            t_max: 1.0,
            r_out: 2.0,
            phi: ProfileSpec::bump(1.0, 1.0),
            psi: ProfileSpec::bump(0.5, 1.0),
            eps_list: DEFAULT_EPS_LIST.to_vec(),
            time_samples: DEFAULT_TIME_SAMPLES,
            tolerances: Tolerance::default(),
            cutoff: default_cutoff(),
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> WaveError {
    WaveError::Config(e.to_string())
}

impl SweepConfig {
    /// Parses and validates. Every failure is a [`WaveError::Config`].
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(config_err)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn wave(&self) -> WaveConfig {
        WaveConfig {
            c: self.c,
            t_max: self.t_max,
            r_out: self.r_out,
        }
    }

    pub fn profiles(&self) -> Result<(RadialProfile, RadialProfile)> {
        Ok((self.phi.build()?, self.psi.build()?))
    }

    /// The data support radii, used to split time integrals.
    pub fn features(&self) -> [f64; 2] {
        [self.phi.support_radius, self.psi.support_radius]
    }

    pub fn validate(&self) -> Result<()> {
        let wave = self.wave();
        wave.validate().map_err(config_err)?;
        self.profiles().map_err(config_err)?;
        let support = self.phi.support_radius.max(self.psi.support_radius);
        wave.check_support(support).map_err(config_err)?;

        if self.eps_list.is_empty() {
            return Err(config_err("eps_list is empty"));
        }
        if let Some(e) = self.eps_list.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(config_err(format!("eps values must be positive, got {e}")));
        }
        if self.eps_list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(config_err("eps_list must be strictly decreasing"));
        }
        // the cutoffs must act well inside the smaller data support
        let limit = 0.5 * self.phi.support_radius.min(self.psi.support_radius);
        if self.eps_list[0] >= limit {
            return Err(config_err(format!(
                "largest eps {} must be below half the data support radius ({limit})",
                self.eps_list[0]
            )));
        }
        if self.time_samples < 5 {
            return Err(config_err(format!(
                "time_samples must be at least 5, got {}",
                self.time_samples
            )));
        }
        let tol = self.tolerances;
        if !(tol.rel > 0.0 && tol.abs > 0.0 && tol.rel.is_finite() && tol.abs.is_finite()) {
            return Err(config_err("tolerances must be positive"));
        }
        if !CUTOFF_NAMES.contains(&self.cutoff.as_str()) {
            return Err(config_err(format!(
                "unknown cutoff '{}', expected one of {CUTOFF_NAMES:?}",
                self.cutoff
            )));
        }
        Ok(())
    }
}
