//! First-order Godunov scheme for isentropic Euler with the exact Riemann solver at every face.

use crate::eos::{GammaLawEos, PointState};
use crate::error::{Error, Result};
use crate::field::{FarField, FluxLog, SolutionField};
use crate::riemann::{sample, solve_riemann, RiemannData};
use crate::viscous::{euler_flux, output_schedule};

/// Default Courant number.
pub const GODUNOV_CFL: f64 = 0.9;

#[derive(Debug, Clone)]
pub struct GodunovSolver {
    pub eos: GammaLawEos,
    pub far: FarField,
    pub cfl: f64,
}

impl GodunovSolver {
    pub fn new(eos: GammaLawEos, far: FarField) -> Self {
        Self {
            eos,
            far,
            cfl: GODUNOV_CFL,
        }
    }

    fn cell(&self, field: &SolutionField, k: isize) -> PointState {
        if k < 0 {
            self.far.left
        } else if k as usize >= field.len() {
            self.far.right
        } else {
            field.state(k as usize)
        }
    }

    /// Exact face fluxes and the largest wave speed seen.
    fn face_fluxes(&self, field: &SolutionField) -> Result<(Vec<[f64; 2]>, f64)> {
        let n = field.len();
        let mut fluxes = Vec::with_capacity(n + 1);
        let mut smax: f64 = 0.0;
        for j in 0..=n {
            let left = self.cell(field, j as isize - 1);
            let right = self.cell(field, j as isize);
            let waves = solve_riemann(&self.eos, &RiemannData { left, right }).map_err(|e| {
                Error::numeric(
                    format!("Riemann problem failed at face {j} (x = {:.6}): {e}", field.grid.x_min + j as f64 * field.grid.dx()),
                    f64::NAN,
                )
            })?;
            smax = smax.max(waves.max_speed());
            fluxes.push(euler_flux(&self.eos, sample(&self.eos, &waves, 0.0)));
        }
        Ok((fluxes, smax))
    }

    /// Advances to `t_end` with snapshots at `output_times` and `t_end`; each snapshot after the
    /// initial one carries the flux log of its interval.
    pub fn run(&self, initial: &SolutionField, t_end: f64, output_times: &[f64]) -> Result<Vec<SolutionField>> {
        let targets = output_schedule(initial.t, t_end, output_times)?;
        let n = initial.len();
        let dx = initial.grid.dx();
        let mut field = initial.clone();
        field.fluxes = None;
        let mut out = vec![field.clone()];
        let mut log = FluxLog::zeros(field.t, n + 1);
        for &target in &targets {
            while field.t < target {
                let (fluxes, smax) = self.face_fluxes(&field)?;
                if !(smax > 0.0) {
                    // nothing moves
                    field.t = target;
                    break;
                }
                let mut dt = self.cfl * dx / smax;
                let remaining = target - field.t;
                let last = dt >= remaining;
                if last {
                    dt = remaining;
                }
                for i in 0..n {
                    field.rho[i] -= dt / dx * (fluxes[i + 1][0] - fluxes[i][0]);
                    field.m[i] -= dt / dx * (fluxes[i + 1][1] - fluxes[i][1]);
                    if field.rho[i] < 0.0 {
                        field.rho[i] = 0.0;
                        field.m[i] = 0.0;
                        field.floor_events += 1;
                    }
                }
                for (j, f) in fluxes.iter().enumerate() {
                    log.mass[j] += dt * f[0];
                    log.momentum[j] += dt * f[1];
                }
                field.t = if last { target } else { field.t + dt };
            }
            let mut snap = field.clone();
            snap.fluxes = Some(std::mem::replace(&mut log, FluxLog::zeros(field.t, n + 1)));
            out.push(snap);
        }
        Ok(out)
    }
}

/// Piecewise-constant Riemann data on the grid: `left` for centres `< 0`, `right` otherwise.
pub fn riemann_step_data(grid: &crate::field::Grid, far: &FarField) -> SolutionField {
    let mut rho = Vec::with_capacity(grid.n_cells);
    let mut m = Vec::with_capacity(grid.n_cells);
    for x in grid.centers() {
        let s = if x < 0.0 { far.left } else { far.right };
        rho.push(s.rho);
        m.push(s.m());
    }
    SolutionField {
        grid: *grid,
        t: 0.0,
        rho,
        m,
        fluxes: None,
        floor_events: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;

    #[test]
    fn sod_converges_toward_exact_solution() {
        let eos = GammaLawEos::new(2.0).unwrap();
        let far = FarField::new(PointState::new(1.0, 0.0), PointState::new(0.125, 0.0)).unwrap();
        let exact = solve_riemann(&eos, &RiemannData { left: far.left, right: far.right }).unwrap();
        let mut errs = Vec::new();
        for n in [200usize, 800] {
            let g = Grid::new(-1.0, 1.0, n).unwrap();
            let snaps = GodunovSolver::new(eos, far).run(&riemann_step_data(&g, &far), 0.3, &[]).unwrap();
            let last = snaps.last().unwrap();
            let err: f64 = (0..n)
                .map(|i| (last.rho[i] - sample(&eos, &exact, g.center(i) / 0.3).rho).abs() * g.dx())
                .sum();
            errs.push(err);
        }
        assert!(errs[1] < 0.5 * errs[0], "{errs:?}");
        assert!(errs[1] < 1e-2);
    }

    #[test]
    fn conserves_mass_up_to_boundary_flux() {
        let eos = GammaLawEos::new(1.4).unwrap();
        let far = FarField::new(PointState::new(1.0, 0.5), PointState::new(0.5, -0.2)).unwrap();
        let g = Grid::new(-1.0, 1.0, 100).unwrap();
        let init = riemann_step_data(&g, &far);
        let snaps = GodunovSolver::new(eos, far).run(&init, 0.2, &[0.1]).unwrap();
        let mut total = init.totals();
        for s in &snaps[1..] {
            let inflow = s.fluxes.as_ref().unwrap().boundary_inflow();
            total[0] += inflow[0];
            total[1] += inflow[1];
            let now = s.totals();
            assert!((now[0] - total[0]).abs() < 1e-13);
            assert!((now[1] - total[1]).abs() < 1e-13);
        }
    }
}
