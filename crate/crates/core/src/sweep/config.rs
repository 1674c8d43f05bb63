//! Run configuration, read from TOML.
//!
//! Every key except `epsilons` has a default; see the README for the full reference.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::diagnostics::{Bump2d, SpaceTimeBox};
use crate::entropy::EntropyGenerator;
use crate::eos::{GammaLawEos, PointState};
use crate::error::{Error, Result};
use crate::field::{FarField, Grid};

/// Environment variable that overrides `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "CNSLAB_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "defaults::gamma")]
    pub gamma: f64,
    #[serde(default = "defaults::alpha")]
    pub alpha: f64,
    /// Strictly positive, sorted descending.
    pub epsilons: Vec<f64>,
    #[serde(default = "defaults::t_end")]
    pub t_end: f64,
    /// Snapshot spacing; snapshots are taken at multiples of it up to `t_end`.
    #[serde(default = "defaults::output_interval")]
    pub output_interval: f64,
    #[serde(default = "defaults::cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default)]
    pub reference: ReferenceSpec,
    #[serde(default)]
    pub diagnostics: DiagnosticSpec,
    #[serde(default)]
    pub snapshots: SnapshotPolicy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "defaults::x_min")]
    pub x_min: f64,
    #[serde(default = "defaults::x_max")]
    pub x_max: f64,
    /// Fixed cell count; overrides the refinement rule when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_cells: Option<usize>,
    /// Cells per viscous length `eps`: `dx = eps / cells_per_epsilon`.
    #[serde(default = "defaults::cells_per_epsilon")]
    pub cells_per_epsilon: f64,
    #[serde(default = "defaults::max_cells")]
    pub max_cells: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub rho: f64,
    pub u: f64,
}

impl From<StateSpec> for PointState {
    fn from(s: StateSpec) -> Self {
        PointState::new(s.rho, s.u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default = "defaults::left")]
    pub left: StateSpec,
    #[serde(default = "defaults::right")]
    pub right: StateSpec,
    /// Mollification half width is `max(width_cells dx, width_epsilons eps)`.
    #[serde(default = "defaults::width_cells")]
    pub width_cells: f64,
    #[serde(default = "defaults::width_epsilons")]
    pub width_epsilons: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceSpec {
    #[serde(default = "defaults::l0")]
    pub l0: f64,
    #[serde(default = "defaults::steepness")]
    pub steepness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticSpec {
    #[serde(default = "defaults::interval")]
    pub integrability_interval: (f64, f64),
    #[serde(default = "defaults::interval")]
    pub local_flux_interval: (f64, f64),
    #[serde(default = "defaults::interval")]
    pub distance_interval: (f64, f64),
    #[serde(default = "defaults::generators")]
    pub generators: Vec<EntropyGenerator>,
    #[serde(default = "defaults::residual_box")]
    pub residual_box: SpaceTimeBox,
    #[serde(default = "defaults::test_function")]
    pub test_function: Bump2d,
}

/// Which snapshots of each run are written to disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapshotPolicy {
    None,
    #[default]
    Final,
    All,
}

mod defaults {
    use super::*;

    pub fn gamma() -> f64 {
        2.0
    }
    pub fn alpha() -> f64 {
        1.0
    }
    pub fn t_end() -> f64 {
        0.4
    }
    pub fn output_interval() -> f64 {
        1e-3
    }
    pub fn cfl() -> f64 {
        0.4
    }
    pub fn x_min() -> f64 {
        -1.0
    }
    pub fn x_max() -> f64 {
        1.0
    }
    pub fn cells_per_epsilon() -> f64 {
        4.0
    }
    pub fn max_cells() -> usize {
        16384
    }
    pub fn left() -> StateSpec {
        StateSpec { rho: 1.0, u: 0.0 }
    }
    pub fn right() -> StateSpec {
        StateSpec { rho: 0.125, u: 0.0 }
    }
    pub fn width_cells() -> f64 {
        10.0
    }
    pub fn width_epsilons() -> f64 {
        1.0
    }
    pub fn l0() -> f64 {
        0.5
    }
    pub fn steepness() -> f64 {
        1.0
    }
    pub fn interval() -> (f64, f64) {
        (-1.0, 1.0)
    }
    pub fn generators() -> Vec<EntropyGenerator> {
        let mut g = EntropyGenerator::admissibility_family().to_vec();
        g.push(EntropyGenerator::half_s_squared());
        g
    }
    pub fn residual_box() -> SpaceTimeBox {
        SpaceTimeBox { x: (-1.0, 1.0), t: (0.1, 0.4) }
    }
    pub fn test_function() -> Bump2d {
        Bump2d { x0: 0.0, wx: 0.8, t0: 0.25, wt: 0.15 }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_min: defaults::x_min(),
            x_max: defaults::x_max(),
            n_cells: None,
            cells_per_epsilon: defaults::cells_per_epsilon(),
            max_cells: defaults::max_cells(),
        }
    }
}

impl Default for InitialSpec {
    fn default() -> Self {
        Self {
            left: defaults::left(),
            right: defaults::right(),
            width_cells: defaults::width_cells(),
            width_epsilons: defaults::width_epsilons(),
        }
    }
}

impl Default for ReferenceSpec {
    fn default() -> Self {
        Self {
            l0: defaults::l0(),
            steepness: defaults::steepness(),
        }
    }
}

impl Default for DiagnosticSpec {
    fn default() -> Self {
        Self {
            integrability_interval: defaults::interval(),
            local_flux_interval: defaults::interval(),
            distance_interval: defaults::interval(),
            generators: defaults::generators(),
            residual_box: defaults::residual_box(),
            test_function: defaults::test_function(),
        }
    }
}

impl RunConfig {
    /// Defaults everywhere, with the given viscosities.
    pub fn with_epsilons(epsilons: Vec<f64>) -> Result<Self> {
        let c = Self {
            gamma: defaults::gamma(),
            alpha: defaults::alpha(),
            epsilons,
            t_end: defaults::t_end(),
            output_interval: defaults::output_interval(),
            cfl: defaults::cfl(),
            grid: GridSpec::default(),
            initial: InitialSpec::default(),
            reference: ReferenceSpec::default(),
            diagnostics: DiagnosticSpec::default(),
            snapshots: SnapshotPolicy::default(),
            output_dir: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn from_toml(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config fields serialize")
    }

    pub fn eos(&self) -> Result<GammaLawEos> {
        GammaLawEos::new(self.gamma)
    }

    pub fn far_field(&self) -> Result<FarField> {
        FarField::new(self.initial.left.into(), self.initial.right.into())
    }

    pub fn in_convergence_range(&self) -> bool {
        self.alpha >= 2.0 / 3.0 && self.alpha <= self.gamma
    }

    /// Grid used for viscosity `eps`.
    pub fn grid_for(&self, eps: f64) -> Result<Grid> {
        let g = &self.grid;
        let n = match g.n_cells {
            Some(n) => n,
            None => {
                let dx = eps / g.cells_per_epsilon;
                (((g.x_max - g.x_min) / dx).round() as usize).min(g.max_cells)
            }
        };
        Grid::new(g.x_min, g.x_max, n)
    }

    /// Mollification half width for viscosity `eps` on `grid`.
    pub fn width_for(&self, eps: f64, grid: &Grid) -> f64 {
        (self.initial.width_cells * grid.dx()).max(self.initial.width_epsilons * eps)
    }

    /// `k * output_interval` for `k >= 1` up to `t_end`; `t_end` itself is always included.
    pub fn output_times(&self) -> Vec<f64> {
        let n = (self.t_end / self.output_interval * (1.0 + 1e-12)).floor() as usize;
        let mut times: Vec<f64> = (1..=n).map(|k| k as f64 * self.output_interval).collect();
        if let Some(last) = times.last_mut() {
            if (*last - self.t_end).abs() <= 1e-9 * self.t_end {
                *last = self.t_end;
            }
        }
        times
    }

    /// Output directory: the environment override, then the config value, then `cnslab-out`.
    pub fn resolve_output_dir(&self) -> PathBuf {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV).filter(|v| !v.is_empty()) {
            return PathBuf::from(dir);
        }
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("cnslab-out"))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(Error::config("gamma", format!("the gamma law needs gamma > 1, got {}", self.gamma)));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::config("alpha", format!("must be nonnegative, got {}", self.alpha)));
        }
        if self.epsilons.is_empty() {
            return Err(Error::config("epsilons", "at least one viscosity is required"));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
            return Err(Error::config("epsilons", format!("viscosities must be positive, got {e}")));
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::config("epsilons", "viscosities must be strictly descending"));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::config("t_end", format!("must be positive, got {}", self.t_end)));
        }
        if !(self.output_interval > 0.0 && self.output_interval <= self.t_end) {
            return Err(Error::config(
                "output_interval",
                format!("must lie in (0, t_end], got {}", self.output_interval),
            ));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::config("cfl", format!("must lie in (0, 1], got {}", self.cfl)));
        }
        let g = &self.grid;
        if !(g.x_min < g.x_max) {
            return Err(Error::config("grid", "x_min must be below x_max"));
        }
        if !(g.cells_per_epsilon > 0.0) {
            return Err(Error::config("grid.cells_per_epsilon", "must be positive"));
        }
        for side in [("initial.left", self.initial.left), ("initial.right", self.initial.right)] {
            if !(side.1.rho > 0.0 && side.1.rho.is_finite() && side.1.u.is_finite()) {
                return Err(Error::config(side.0, "far-field density must be positive"));
            }
        }
        if !(self.initial.width_cells > 2.0) {
            return Err(Error::config("initial.width_cells", "must exceed 2"));
        }
        if !(self.initial.width_epsilons >= 0.0) {
            return Err(Error::config("initial.width_epsilons", "must be nonnegative"));
        }
        if !(self.reference.l0 > 0.0) {
            return Err(Error::config("reference.l0", "must be positive"));
        }
        if !(self.reference.steepness >= 1.0) {
            return Err(Error::config("reference.steepness", "must be at least 1"));
        }
        let d = &self.diagnostics;
        for (name, (a, b)) in [
            ("diagnostics.integrability_interval", d.integrability_interval),
            ("diagnostics.local_flux_interval", d.local_flux_interval),
            ("diagnostics.distance_interval", d.distance_interval),
        ] {
            if !(a < b && a >= g.x_min && b <= g.x_max) {
                return Err(Error::config(name, format!("[{a}, {b}] must lie inside the grid")));
            }
        }
        let bx = d.residual_box;
        if !(bx.x.0 < bx.x.1 && bx.t.0 < bx.t.1) {
            return Err(Error::config("diagnostics.residual_box", "empty box"));
        }
        let tf = d.test_function;
        if !(tf.wx > 0.0 && tf.wt > 0.0) {
            return Err(Error::config("diagnostics.test_function", "widths must be positive"));
        }
        for (i, &eps) in self.epsilons.iter().enumerate() {
            self.grid_for(eps).map_err(|e| match e {
                Error::Config { message, .. } => Error::config(format!("epsilons[{i}]"), message),
                other => other,
            })?;
        }
        Ok(())
    }
}

/// Reads and validates a TOML config file.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let config = RunConfig::from_toml(&text).map_err(|message| Error::Parse {
        path: path.to_path_buf(),
        message,
    })?;
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = RunConfig::from_toml("epsilons = [0.01]").unwrap();
        c.validate().unwrap();
        assert_eq!(c.cfl, 0.4);
        assert_eq!(c.initial.width_cells, 10.0);
        assert_eq!(c.initial.width_epsilons, 1.0);
        let g = c.grid_for(0.01).unwrap();
        assert_eq!(g.n_cells, 800);
        assert_eq!(c.width_for(0.01, &g), 0.025_f64.max(0.01));
        let t = c.output_times();
        assert_eq!(t.len(), 400);
        assert_eq!(*t.last().unwrap(), 0.4);
    }

    #[test]
    fn rejects_bad_values_with_field_names() {
        let err = RunConfig::from_toml("gamma = 1.0\nepsilons = [0.01]").unwrap().validate().unwrap_err();
        assert!(matches!(&err, Error::Config { field, message } if field == "gamma" && message.contains("gamma > 1")));
        let err = RunConfig::from_toml("epsilons = [0.01, -1.0]").unwrap().validate().unwrap_err();
        assert!(matches!(&err, Error::Config { field, .. } if field == "epsilons"));
        let err = RunConfig::from_toml("epsilons = [0.001, 0.01]").unwrap().validate().unwrap_err();
        assert!(matches!(&err, Error::Config { field, .. } if field == "epsilons"));
        assert!(RunConfig::from_toml("epsilons = [0.01]\nbogus = 1").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let mut c = RunConfig::with_epsilons(vec![0.02, 0.01]).unwrap();
        c.grid.n_cells = Some(123);
        c.diagnostics.generators.push(EntropyGenerator::bump(-0.5, 1.0).unwrap());
        c.output_dir = Some(PathBuf::from("out/x"));
        c.snapshots = SnapshotPolicy::All;
        let again = RunConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(c, again);
    }
}
