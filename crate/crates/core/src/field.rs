//! Uniform grids, cell-averaged solution fields and their snapshot files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::eos::PointState;
use crate::error::{Error, Result};

pub const MIN_CELLS: usize = 8;

/// Uniform partition of `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::config("grid", format!("empty interval [{x_min}, {x_max}]")));
        }
        if n_cells < MIN_CELLS {
            return Err(Error::config(
                "n_cells",
                format!("need at least {MIN_CELLS} cells, got {n_cells}"),
            ));
        }
        Ok(Self { x_min, x_max, n_cells })
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_cells as f64
    }

    #[inline]
    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    /// Indices of cells whose centers lie in `[a, b]`; errors if the interval leaves the grid.
    pub fn cells_in(&self, a: f64, b: f64) -> Result<std::ops::Range<usize>> {
        let slack = 1e-12 * self.length();
        if !(a < b) || a < self.x_min - slack || b > self.x_max + slack {
            return Err(Error::domain(format!(
                "interval [{a}, {b}] is not inside the grid [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        let dx = self.dx();
        let lo = ((a - self.x_min) / dx - 0.5).ceil().max(0.0) as usize;
        let hi = (((b - self.x_min) / dx - 0.5).floor() + 1.0).max(0.0) as usize;
        Ok(lo.min(self.n_cells)..hi.min(self.n_cells))
    }
}

/// Far-field states at `x -> -inf` and `x -> +inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarField {
    pub left: PointState,
    pub right: PointState,
}

impl FarField {
    pub fn new(left: PointState, right: PointState) -> Result<Self> {
        if !(left.rho > 0.0 && right.rho > 0.0) {
            return Err(Error::config(
                "far_field",
                format!("far-field densities must be positive, got {} and {}", left.rho, right.rho),
            ));
        }
        Ok(Self { left, right })
    }
}

/// Face fluxes integrated in time over the interval that ends at a snapshot.
///
/// Face `j` separates cell `j - 1` from cell `j`; faces `0` and `n_cells` are the boundaries.
/// For every cell, `U(t_end) - U(t_start) = -(Phi[j+1] - Phi[j]) / dx` holds up to roundoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxLog {
    pub t_start: f64,
    pub mass: Vec<f64>,
    pub momentum: Vec<f64>,
}

impl FluxLog {
    pub fn zeros(t_start: f64, n_faces: usize) -> Self {
        Self {
            t_start,
            mass: vec![0.0; n_faces],
            momentum: vec![0.0; n_faces],
        }
    }

    /// Net (mass, momentum) that entered through the two boundaries.
    pub fn boundary_inflow(&self) -> [f64; 2] {
        let n = self.mass.len() - 1;
        [
            self.mass[0] - self.mass[n],
            self.momentum[0] - self.momentum[n],
        ]
    }
}

/// Cell-averaged density and momentum at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionField {
    pub grid: Grid,
    pub t: f64,
    pub rho: Vec<f64>,
    pub m: Vec<f64>,
    /// Fluxes since the previous snapshot, when produced by a solver.
    pub fluxes: Option<FluxLog>,
    /// Cumulative count of density-floor activations.
    pub floor_events: u64,
}

impl SolutionField {
    pub fn new(grid: Grid, t: f64, rho: Vec<f64>, m: Vec<f64>) -> Result<Self> {
        if rho.len() != grid.n_cells || m.len() != grid.n_cells {
            return Err(Error::config(
                "field",
                format!(
                    "arrays of length ({}, {}) on a grid of {} cells",
                    rho.len(),
                    m.len(),
                    grid.n_cells
                ),
            ));
        }
        Ok(Self {
            grid,
            t,
            rho,
            m,
            fluxes: None,
            floor_events: 0,
        })
    }

    pub fn constant(grid: Grid, state: PointState) -> Self {
        Self {
            grid,
            t: 0.0,
            rho: vec![state.rho; grid.n_cells],
            m: vec![state.m(); grid.n_cells],
            fluxes: None,
            floor_events: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }

    #[inline]
    pub fn state(&self, i: usize) -> PointState {
        PointState::from_conserved(self.rho[i], self.m[i])
    }

    pub fn velocity(&self) -> Vec<f64> {
        self.rho
            .iter()
            .zip(&self.m)
            .map(|(&r, &m)| if r > 0.0 { m / r } else { 0.0 })
            .collect()
    }

    /// `(∫ rho dx, ∫ m dx)` by the midpoint rule.
    pub fn totals(&self) -> [f64; 2] {
        let dx = self.grid.dx();
        [
            self.rho.iter().sum::<f64>() * dx,
            self.m.iter().sum::<f64>() * dx,
        ]
    }

    pub fn min_density(&self) -> f64 {
        self.rho.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.rho.iter().chain(&self.m).all(|v| v.is_finite())
    }
}

/// Parameters written into snapshot headers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub gamma: f64,
    pub alpha: f64,
    pub epsilon: f64,
}

/// Column order of snapshot files.
pub const SNAPSHOT_COLUMNS: [&str; 4] = ["x", "rho", "m", "u"];

/// Renders a snapshot: `# key = value` header lines, a `# columns:` line, then one
/// whitespace-separated row per cell in [`SNAPSHOT_COLUMNS`] order.
pub fn format_snapshot(field: &SolutionField, meta: &SnapshotMeta) -> String {
    let mut out = String::with_capacity(80 * field.len() + 256);
    let _ = writeln!(out, "# cnslab snapshot v1");
    let _ = writeln!(out, "# gamma = {:e}", meta.gamma);
    let _ = writeln!(out, "# alpha = {:e}", meta.alpha);
    let _ = writeln!(out, "# epsilon = {:e}", meta.epsilon);
    let _ = writeln!(out, "# t = {:e}", field.t);
    let _ = writeln!(out, "# dx = {:e}", field.grid.dx());
    let _ = writeln!(out, "# x_min = {:e}", field.grid.x_min);
    let _ = writeln!(out, "# x_max = {:e}", field.grid.x_max);
    let _ = writeln!(out, "# n_cells = {}", field.grid.n_cells);
    let _ = writeln!(out, "# floor_events = {}", field.floor_events);
    let _ = writeln!(out, "# columns: {}", SNAPSHOT_COLUMNS.join(" "));
    let u = field.velocity();
    for i in 0..field.len() {
        let _ = writeln!(
            out,
            "{:.17e} {:.17e} {:.17e} {:.17e}",
            field.grid.center(i),
            field.rho[i],
            field.m[i],
            u[i]
        );
    }
    out
}

pub fn write_snapshot(path: &Path, field: &SolutionField, meta: &SnapshotMeta) -> Result<()> {
    fs::write(path, format_snapshot(field, meta)).map_err(|e| Error::io(path, e))
}

/// Reads a snapshot written by [`write_snapshot`]. Flux logs are not persisted.
pub fn read_snapshot(path: &Path) -> Result<(SolutionField, SnapshotMeta)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_snapshot(&text).map_err(|message| Error::Parse {
        path: path.to_path_buf(),
        message,
    })
}

pub fn parse_snapshot(text: &str) -> std::result::Result<(SolutionField, SnapshotMeta), String> {
    let mut header = std::collections::HashMap::new();
    let mut rho = Vec::new();
    let mut m = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.split_once('=') {
                header.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<f64> = line
            .split_whitespace()
            .map(|c| c.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| format!("line {}: {e}", lineno + 1))?;
        if cols.len() != SNAPSHOT_COLUMNS.len() {
            return Err(format!("line {}: expected 4 columns", lineno + 1));
        }
        rho.push(cols[1]);
        m.push(cols[2]);
    }
    let get = |k: &str| -> std::result::Result<f64, String> {
        header
            .get(k)
            .ok_or_else(|| format!("missing header `{k}`"))?
            .parse::<f64>()
            .map_err(|e| format!("header `{k}`: {e}"))
    };
    let n_cells = get("n_cells")? as usize;
    let grid = Grid::new(get("x_min")?, get("x_max")?, n_cells).map_err(|e| e.to_string())?;
    let mut field = SolutionField::new(grid, get("t")?, rho, m).map_err(|e| e.to_string())?;
    field.floor_events = get("floor_events")? as u64;
    let meta = SnapshotMeta {
        gamma: get("gamma")?,
        alpha: get("alpha")?,
        epsilon: get("epsilon")?,
    };
    Ok((field, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_geometry() {
        let g = Grid::new(-1.0, 1.0, 8).unwrap();
        assert_eq!(g.dx(), 0.25);
        assert_eq!(g.center(0), -0.875);
        assert!(Grid::new(0.0, 1.0, 7).is_err());
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert_eq!(g.cells_in(-1.0, 1.0).unwrap(), 0..8);
        assert_eq!(g.cells_in(-0.5, 0.5).unwrap(), 2..6);
        assert!(g.cells_in(-2.0, 0.0).is_err());
    }

    #[test]
    fn snapshot_text_round_trip() {
        let g = Grid::new(-1.0, 1.0, 16).unwrap();
        let rho: Vec<f64> = (0..16).map(|i| 1.0 + 0.1 * i as f64).collect();
        let m: Vec<f64> = (0..16).map(|i| (i as f64).sin() / 3.0).collect();
        let mut f = SolutionField::new(g, 0.25, rho, m).unwrap();
        f.floor_events = 3;
        let meta = SnapshotMeta { gamma: 2.0, alpha: 1.0, epsilon: 1e-2 };
        let text = format_snapshot(&f, &meta);
        assert!(text.contains("# columns: x rho m u"));
        let (back, meta2) = parse_snapshot(&text).unwrap();
        assert_eq!(meta, meta2);
        assert_eq!(back.rho, f.rho);
        assert_eq!(back.m, f.m);
        assert_eq!(back.t, 0.25);
        assert_eq!(back.floor_events, 3);
    }

    #[test]
    fn far_field_needs_positive_density() {
        assert!(FarField::new(PointState::new(0.0, 0.0), PointState::new(1.0, 0.0)).is_err());
    }
}
