use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::closed_form::BoundaryKind;
use crate::error::{Result, WaveError};

use super::config::SweepConfig;
use super::sweep::SweepRow;

pub const CSV_HEADER: [&str; 8] = [
    "eps",
    "sup_norm",
    "argmax_t",
    "D",
    "E1",
    "E2",
    "identity1_residual",
    "identity2_residual",
];

pub const RATE_NOTE: &str = "Convergence of the extended exterior solutions is known only \
qualitatively, together with one-sided energy growth bounds; fitted_rate is an empirical \
property of this data and eps range, not a proven rate.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub config: SweepConfig,
    pub crate_version: String,
    pub wall_time_s: f64,
    pub rate_note: String,
}

impl ReportMetadata {
    pub fn new(config: SweepConfig, wall_time_s: f64) -> Self {
        Self {
            config,
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_s,
            rate_note: RATE_NOTE.to_string(),
        }
    }
}

/// Outcome of one ε sweep. Rows follow the configured ε order (decreasing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub boundary: BoundaryKind,
    pub rows: Vec<SweepRow>,
    /// Least-squares slope of `log(sup_norm)` against `log(ε)`; absent with fewer than three usable rows.
    pub fitted_rate: Option<f64>,
    pub partial: bool,
    pub metadata: ReportMetadata,
}

/// A CSV row, in [`CSV_HEADER`] order.
#[derive(Serialize)]
struct CsvRow {
    eps: f64,
    sup_norm: Option<f64>,
    argmax_t: Option<f64>,
    d: Option<f64>,
    e1: Option<f64>,
    e2: Option<f64>,
    identity1_residual: Option<f64>,
    identity2_residual: Option<f64>,
}

fn csv_err(e: csv::Error) -> WaveError {
    WaveError::InvalidArgument(format!("csv output failed: {e}"))
}

impl ConvergenceReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| WaveError::InvalidArgument(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| WaveError::InvalidArgument(e.to_string()))
    }

    /// The JSON report with the wall time zeroed, for comparing runs.
    pub fn payload_json(&self) -> Result<String> {
        let mut r = self.clone();
        r.metadata.wall_time_s = 0.0;
        r.to_json()
    }

    /// One line per row; failed rows and absent components leave empty fields.
    /// The identity columns hold `residual / (1 + |lhs|)`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(CSV_HEADER).map_err(csv_err)?;
        for row in &self.rows {
            let m = row.metrics.as_ref();
            w.serialize(CsvRow {
                eps: row.eps,
                sup_norm: m.map(|m| m.sup_norm),
                argmax_t: m.map(|m| m.argmax_t),
                d: m.map(|m| m.at_max.d_eps),
                e1: m.map(|m| m.at_max.e_eps),
                e2: m.and_then(|m| m.at_max.ee_eps),
                identity1_residual: m.map(|m| m.identity1.relative()),
                identity2_residual: m.and_then(|m| m.identity2.map(|c| c.relative())),
            })
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| csv_err(e.into()))
    }

    /// Two columns, `eps sup_norm`, for plotting.
    pub fn write_plot_data<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# eps sup_norm")?;
        for row in &self.rows {
            if let Some(m) = &row.metrics {
                writeln!(out, "{} {}", row.eps, m.sup_norm)?;
            }
        }
        Ok(())
    }
}
