use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::viscous::ConservationAudit;

/// Bumped whenever a field of [`DiagnosticsReport`] changes meaning or disappears.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Admissibility numbers of an initial profile.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct InitialDataReport {
    /// `∫ rho |u - u_bar| dx`.
    pub m0: f64,
    /// Relative total energy.
    pub e0: f64,
    /// `eps^2 ∫ rho_x^2 / rho^(3 - 2 alpha) dx`.
    pub e1: f64,
    /// Minimum density.
    pub c0: f64,
    pub floor_hit: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1Row {
    pub t: f64,
    pub l1_rho: f64,
    pub l1_m: f64,
}

/// Norms and test-function pairing of one entropy residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub generator: String,
    pub box_x: (f64, f64),
    pub box_t: (f64, f64),
    pub negative_sobolev: f64,
    pub l2: f64,
    pub pairing: f64,
}

/// Everything measured on one viscous run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub schema_version: u32,
    pub gamma: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub n_cells: usize,
    pub dx: f64,
    pub in_convergence_range: bool,
    pub initial: InitialDataReport,
    /// Snapshot times shared by all series below.
    pub times: Vec<f64>,
    pub energy_series: Vec<f64>,
    /// Cumulative `eps ∫∫ rho^alpha u_x^2`.
    pub dissipation: Vec<f64>,
    /// `eps^2 ∫ rho^(2 alpha - 3) rho_x^2` at each time.
    pub grad_functional_instant: Vec<f64>,
    /// Cumulative `eps ∫∫ rho^(alpha + gamma - 3) rho_x^2`.
    pub grad_functional_cum: Vec<f64>,
    pub integrability_interval: (f64, f64),
    /// `∫∫ rho^(gamma + 1)` over the integrability interval up to the final time.
    pub rho_gamma_plus_one: f64,
    pub local_flux_interval: (f64, f64),
    /// `∫∫ (rho^(gamma + theta) + rho |u|^3)` over the local interval up to the final time.
    pub local_flux: f64,
    pub entropy_residuals: Vec<ResidualSummary>,
    pub l1_distances: Vec<L1Row>,
    pub steps: usize,
    pub floor_events: u64,
    pub conservation: ConservationAudit,
    pub warnings: Vec<String>,
}

impl DiagnosticsReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields serialize")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let report: Self = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if report.schema_version != REPORT_SCHEMA_VERSION {
            return Err(format!(
                "unsupported schema version {} (expected {REPORT_SCHEMA_VERSION})",
                report.schema_version
            ));
        }
        Ok(report)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|message| Error::Parse {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Values at the final time (or over the whole run) of the uniformly bounded functionals.
    pub fn uniformity_row(&self) -> UniformityRow {
        let last = |v: &[f64]| v.last().copied().unwrap_or(0.0);
        UniformityRow {
            epsilon: self.epsilon,
            energy: last(&self.energy_series),
            dissipation: last(&self.dissipation),
            grad_instant: last(&self.grad_functional_instant),
            grad_cumulative: last(&self.grad_functional_cum),
            rho_gamma_plus_one: self.rho_gamma_plus_one,
            local_flux: self.local_flux,
            initial_e1: self.initial.e1,
        }
    }
}

/// One row of the uniformity table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniformityRow {
    pub epsilon: f64,
    pub energy: f64,
    pub dissipation: f64,
    pub grad_instant: f64,
    pub grad_cumulative: f64,
    pub rho_gamma_plus_one: f64,
    pub local_flux: f64,
    pub initial_e1: f64,
}

impl UniformityRow {
    pub const HEADER: [&'static str; 8] = [
        "epsilon",
        "energy",
        "dissipation",
        "grad_instant",
        "grad_cumulative",
        "rho_gamma_plus_one",
        "local_flux",
        "initial_e1",
    ];

    pub fn values(&self) -> [f64; 8] {
        [
            self.epsilon,
            self.energy,
            self.dissipation,
            self.grad_instant,
            self.grad_cumulative,
            self.rho_gamma_plus_one,
            self.local_flux,
            self.initial_e1,
        ]
    }
}
