//! Finite-volume solver for the isentropic Navier–Stokes equations with viscosity `eps rho^alpha`.
//!
//! Conservative part: first-order Rusanov flux. Viscous part: the face flux
//! `eps mu_{j} (u_j - u_{j-1}) / dx` with `mu_j` the arithmetic mean of `rho^alpha` over the two
//! neighbours. Time integration: two-stage SSP Runge–Kutta, written as a single conservative update
//! with the stage-averaged face fluxes so that conservation holds face by face. The boundary
//! cells see ghost states pinned to the far field.

use serde::{Deserialize, Serialize};

use crate::eos::{GammaLawEos, PointState};
use crate::error::{Error, Result};
use crate::field::{FarField, FluxLog, Grid, SolutionField};

/// Viscosity amplitude and density exponent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViscousParams {
    pub epsilon: f64,
    pub alpha: f64,
}

impl ViscousParams {
    /// `epsilon = 0` is accepted so the inviscid code path can be exercised.
    pub fn new(epsilon: f64, alpha: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(Error::config("epsilon", format!("must be nonnegative, got {epsilon}")));
        }
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::config("alpha", format!("must be nonnegative, got {alpha}")));
        }
        Ok(Self { epsilon, alpha })
    }

    /// Whether `2/3 <= alpha <= gamma`, the range where vanishing-viscosity convergence is known.
    pub fn in_convergence_range(&self, gamma: f64) -> bool {
        self.alpha >= 2.0 / 3.0 && self.alpha <= gamma
    }
}

/// `(m, m^2 / rho + p)`, zero at vacuum.
#[inline]
pub fn euler_flux(eos: &GammaLawEos, state: PointState) -> [f64; 2] {
    if state.rho <= 0.0 {
        return [0.0, 0.0];
    }
    let m = state.rho * state.u;
    [m, m * state.u + eos.pressure_unchecked(state.rho)]
}

/// Local Lax–Friedrichs flux with speed `max(|u_L| + c_L, |u_R| + c_R)`.
#[inline]
pub fn numerical_flux(eos: &GammaLawEos, left: PointState, right: PointState) -> [f64; 2] {
    let fl = euler_flux(eos, left);
    let fr = euler_flux(eos, right);
    let sl = left.u.abs() + eos.sound_speed_unchecked(left.rho);
    let sr = right.u.abs() + eos.sound_speed_unchecked(right.rho);
    let a = sl.max(sr);
    [
        0.5 * (fl[0] + fr[0]) - 0.5 * a * (right.rho - left.rho),
        0.5 * (fl[1] + fr[1]) - 0.5 * a * (right.m() - left.m()),
    ]
}

/// `eps D-(mu D+ u)` at every cell that has two neighbours in the given arrays; end entries are
/// zero. Callers that need boundary values pad the arrays with ghost states.
pub fn viscous_term(rho: &[f64], u: &[f64], dx: f64, params: &ViscousParams) -> Vec<f64> {
    let n = rho.len().min(u.len());
    let mut out = vec![0.0; n];
    if n < 3 || params.epsilon == 0.0 {
        return out;
    }
    let face = |j: usize| {
        // face between j-1 and j
        let mu = 0.5 * (rho[j - 1].powf(params.alpha) + rho[j].powf(params.alpha));
        params.epsilon * mu * (u[j] - u[j - 1]) / dx
    };
    let mut left = face(1);
    for i in 1..n - 1 {
        let right = face(i + 1);
        out[i] = (right - left) / dx;
        left = right;
    }
    out
}

/// Time step from the hyperbolic and viscous restrictions.
///
/// The viscous bound uses the diffusivity `eps max(mu_{i-1/2}, mu_{i+1/2}) / rho_i`, which equals
/// `eps rho^(alpha - 1)` on smooth data, with densities floored at `rho_floor`.
pub fn stable_dt(
    eos: &GammaLawEos,
    field: &SolutionField,
    far: &FarField,
    params: &ViscousParams,
    cfl: f64,
    rho_floor: f64,
) -> Result<f64> {
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::config("cfl", format!("must lie in (0, 1], got {cfl}")));
    }
    if !field.is_finite() {
        return Err(Error::numeric("non-finite field values", f64::NAN));
    }
    let dx = field.grid.dx();
    let n = field.len();
    let rho_at = |k: isize| -> f64 {
        if k < 0 {
            far.left.rho
        } else if k as usize >= n {
            far.right.rho
        } else {
            field.rho[k as usize]
        }
        .max(rho_floor)
    };
    let mut dt = f64::INFINITY;
    for i in 0..n {
        let rho = field.rho[i].max(rho_floor);
        let u = field.m[i] / rho;
        let speed = u.abs() + eos.sound_speed_unchecked(rho);
        if speed > 0.0 {
            dt = dt.min(dx / speed);
        }
        if params.epsilon > 0.0 {
            let k = i as isize;
            let pw = |r: f64| r.powf(params.alpha);
            let mu_l = 0.5 * (pw(rho_at(k - 1)) + pw(rho));
            let mu_r = 0.5 * (pw(rho) + pw(rho_at(k + 1)));
            let diffusivity = params.epsilon * mu_l.max(mu_r) / rho;
            dt = dt.min(dx * dx / (2.0 * diffusivity));
        }
    }
    for s in [far.left, far.right] {
        let speed = s.u.abs() + eos.sound_speed_unchecked(s.rho);
        if speed > 0.0 {
            dt = dt.min(dx / speed);
        }
    }
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::numeric("no finite stable time step", dt));
    }
    Ok(cfl * dt)
}

/// Smooth monotone transition between the far-field states centred at `x = 0`.
///
/// Each component is the step data convolved with a compactly supported `C^inf` bump of half
/// width `width`, giving `left + (right - left) S(x / width)` with
/// `S(z) = f(1 + z) / (f(1 + z) + f(1 - z))`, `f(t) = exp(-1/t)` for `t > 0`.
pub fn mollified_riemann_data(grid: &Grid, far: &FarField, width: f64) -> Result<SolutionField> {
    if !(width > 2.0 * grid.dx()) {
        return Err(Error::config(
            "mollification_width",
            format!("width {width} must exceed two cells ({})", 2.0 * grid.dx()),
        ));
    }
    let mut rho = Vec::with_capacity(grid.n_cells);
    let mut m = Vec::with_capacity(grid.n_cells);
    for i in 0..grid.n_cells {
        let s = smooth_step(grid.center(i) / width);
        let r = far.left.rho + (far.right.rho - far.left.rho) * s;
        let u = far.left.u + (far.right.u - far.left.u) * s;
        rho.push(r);
        m.push(r * u);
    }
    SolutionField::new(*grid, 0.0, rho, m)
}

/// `C^inf` step: 0 for `z <= -1`, 1 for `z >= 1`, `S(-z) = 1 - S(z)`.
pub fn smooth_step(z: f64) -> f64 {
    if z <= -1.0 {
        return 0.0;
    }
    if z >= 1.0 {
        return 1.0;
    }
    let f = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
    let a = f(1.0 + z);
    let b = f(1.0 - z);
    a / (a + b)
}

/// Derivative of [`smooth_step`].
pub fn smooth_step_derivative(z: f64) -> f64 {
    if z <= -1.0 || z >= 1.0 {
        return 0.0;
    }
    let (p, q) = (1.0 + z, 1.0 - z);
    let a = (-1.0 / p).exp();
    let b = (-1.0 / q).exp();
    let da = a / (p * p);
    let db = -b / (q * q);
    (da * (a + b) - a * (da + db)) / ((a + b) * (a + b))
}

/// Rejects domains where the fastest far-field signal (with a 50% margin) could reach a boundary
/// from the transition region `[-half_width, half_width]` before `t_end`.
pub fn preflight_wave_arrival(
    eos: &GammaLawEos,
    far: &FarField,
    grid: &Grid,
    half_width: f64,
    t_end: f64,
) -> Result<()> {
    let speed = [far.left, far.right]
        .iter()
        .map(|s| s.u.abs() + eos.sound_speed_unchecked(s.rho))
        .fold(0.0, f64::max);
    let reach = half_width + 1.5 * speed * t_end;
    if -reach <= grid.x_min || reach >= grid.x_max {
        return Err(Error::config(
            "grid",
            format!(
                "waves may reach the boundary by t_end={t_end}: need [{:.4}, {:.4}] inside [{}, {}]",
                -reach, reach, grid.x_min, grid.x_max
            ),
        ));
    }
    Ok(())
}

/// Boundary-flux bookkeeping for one run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConservationAudit {
    pub initial: [f64; 2],
    pub final_totals: [f64; 2],
    pub boundary_inflow: [f64; 2],
    /// `|final - initial - inflow| / max(|initial|, scale)` per component.
    pub relative_drift: [f64; 2],
}

impl ConservationAudit {
    pub fn new(initial: [f64; 2], final_totals: [f64; 2], inflow: [f64; 2], scale: [f64; 2]) -> Self {
        let mut drift = [0.0; 2];
        for k in 0..2 {
            let denom = initial[k].abs().max(scale[k]).max(f64::MIN_POSITIVE);
            drift[k] = (final_totals[k] - initial[k] - inflow[k]).abs() / denom;
        }
        Self {
            initial,
            final_totals,
            boundary_inflow: inflow,
            relative_drift: drift,
        }
    }
}

/// Snapshots plus run bookkeeping.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub snapshots: Vec<SolutionField>,
    pub steps: usize,
    pub floor_events: u64,
    pub audit: ConservationAudit,
    pub warnings: Vec<String>,
}

/// Explicit solver for one `(eos, eps, alpha)` on a fixed grid with pinned far fields.
#[derive(Debug, Clone)]
pub struct ViscousSolver {
    pub eos: GammaLawEos,
    pub params: ViscousParams,
    pub far: FarField,
    pub cfl: f64,
    pub rho_floor: f64,
}

/// Result of one step.
#[derive(Debug, Clone)]
pub struct StepOutcome {
    pub field: SolutionField,
    /// Stage-averaged face fluxes times `dt` (mass, momentum), `n_cells + 1` faces each.
    pub face_mass: Vec<f64>,
    pub face_momentum: Vec<f64>,
    pub floor_events: u64,
}

impl ViscousSolver {
    pub fn new(eos: GammaLawEos, params: ViscousParams, far: FarField, cfl: f64) -> Result<Self> {
        if !(cfl > 0.0 && cfl <= 1.0) {
            return Err(Error::config("cfl", format!("must lie in (0, 1], got {cfl}")));
        }
        let rho_floor = 1e-10 * far.left.rho.max(far.right.rho);
        Ok(Self {
            eos,
            params,
            far,
            cfl,
            rho_floor,
        })
    }

    pub fn stable_dt(&self, field: &SolutionField) -> Result<f64> {
        stable_dt(&self.eos, field, &self.far, &self.params, self.cfl, self.rho_floor)
    }

    /// Face fluxes of the semi-discrete operator: Rusanov minus viscous flux.
    fn face_fluxes(&self, grid: &Grid, rho: &[f64], m: &[f64], mass: &mut [f64], mom: &mut [f64]) {
        let n = rho.len();
        let state = |k: isize| -> PointState {
            if k < 0 {
                self.far.left
            } else if k as usize >= n {
                self.far.right
            } else {
                PointState::from_conserved(rho[k as usize], m[k as usize])
            }
        };
        let dx = grid.dx();
        let eps = self.params.epsilon;
        let alpha = self.params.alpha;
        let mut prev = state(-1);
        let mut prev_pow = prev.rho.powf(alpha);
        for j in 0..=n {
            let next = state(j as isize);
            let f = numerical_flux(&self.eos, prev, next);
            let next_pow = if eps > 0.0 { next.rho.powf(alpha) } else { 0.0 };
            let visc = if eps > 0.0 {
                eps * 0.5 * (prev_pow + next_pow) * (next.u - prev.u) / dx
            } else {
                0.0
            };
            mass[j] = f[0];
            mom[j] = f[1] - visc;
            prev = next;
            prev_pow = next_pow;
        }
    }

    fn apply_floor(&self, rho: &mut [f64]) -> u64 {
        let mut events = 0;
        for r in rho.iter_mut() {
            if *r < self.rho_floor {
                *r = self.rho_floor;
                events += 1;
            }
        }
        events
    }

    /// One SSP-RK2 step of size `dt`.
    pub fn step(&self, field: &SolutionField, dt: f64) -> Result<StepOutcome> {
        let grid = field.grid;
        let n = field.len();
        let dx = grid.dx();
        let mut f0m = vec![0.0; n + 1];
        let mut f0p = vec![0.0; n + 1];
        self.face_fluxes(&grid, &field.rho, &field.m, &mut f0m, &mut f0p);

        let mut rho1 = vec![0.0; n];
        let mut m1 = vec![0.0; n];
        let k = dt / dx;
        for i in 0..n {
            rho1[i] = field.rho[i] - k * (f0m[i + 1] - f0m[i]);
            m1[i] = field.m[i] - k * (f0p[i + 1] - f0p[i]);
        }
        let mut events = self.apply_floor(&mut rho1);

        let mut f1m = vec![0.0; n + 1];
        let mut f1p = vec![0.0; n + 1];
        self.face_fluxes(&grid, &rho1, &m1, &mut f1m, &mut f1p);

        // stage-averaged, time-integrated face fluxes
        for j in 0..=n {
            f0m[j] = 0.5 * dt * (f0m[j] + f1m[j]);
            f0p[j] = 0.5 * dt * (f0p[j] + f1p[j]);
        }
        let mut rho = vec![0.0; n];
        let mut m = vec![0.0; n];
        for i in 0..n {
            rho[i] = field.rho[i] - (f0m[i + 1] - f0m[i]) / dx;
            m[i] = field.m[i] - (f0p[i + 1] - f0p[i]) / dx;
        }
        events += self.apply_floor(&mut rho);

        let out = SolutionField {
            grid,
            t: field.t + dt,
            rho,
            m,
            fluxes: None,
            floor_events: field.floor_events + events,
        };
        if !out.is_finite() {
            let bad = out
                .rho
                .iter()
                .zip(&out.m)
                .position(|(r, m)| !(r.is_finite() && m.is_finite()))
                .unwrap_or(0);
            return Err(Error::numeric(
                format!(
                    "non-finite state at cell {bad} (x = {:.6}) after t = {:.6e}",
                    grid.center(bad),
                    out.t
                ),
                f64::NAN,
            ));
        }
        Ok(StepOutcome {
            field: out,
            face_mass: f0m,
            face_momentum: f0p,
            floor_events: events,
        })
    }

    /// Advances to `t_end`, emitting the initial field and one snapshot per output time (and at
    /// `t_end`). Each emitted snapshot after the first carries the flux log of its interval.
    /// `observer` sees every pre-step state and step size.
    pub fn run(
        &self,
        initial: &SolutionField,
        t_end: f64,
        output_times: &[f64],
        mut observer: impl FnMut(&SolutionField, f64),
    ) -> Result<RunOutput> {
        if !(t_end >= 0.0 && t_end.is_finite()) {
            return Err(Error::config("t_end", format!("must be nonnegative, got {t_end}")));
        }
        let targets = output_schedule(initial.t, t_end, output_times)?;
        let n = initial.len();
        let mut field = initial.clone();
        field.fluxes = None;
        let start_totals = field.totals();
        let mut snapshots = vec![field.clone()];
        let mut log = FluxLog::zeros(field.t, n + 1);
        let mut inflow = [0.0; 2];
        let mut steps = 0usize;
        let mut warnings = Vec::new();
        let mut warned = false;

        for &target in &targets {
            while field.t < target {
                let mut dt = self.stable_dt(&field)?;
                let remaining = target - field.t;
                // avoid leaving a sliver step before the output time
                if dt >= remaining || remaining - dt < 1e-12 * target.max(1.0) {
                    dt = remaining;
                }
                observer(&field, dt);
                let outcome = self.step(&field, dt)?;
                for j in 0..=n {
                    log.mass[j] += outcome.face_mass[j];
                    log.momentum[j] += outcome.face_momentum[j];
                }
                inflow[0] += outcome.face_mass[0] - outcome.face_mass[n];
                inflow[1] += outcome.face_momentum[0] - outcome.face_momentum[n];
                field = outcome.field;
                if dt == remaining {
                    field.t = target;
                }
                steps += 1;
            }
            if !warned {
                if let Some(msg) = boundary_disturbance(&self.eos, &field, &self.far) {
                    warnings.push(msg);
                    warned = true;
                }
            }
            let mut snap = field.clone();
            snap.fluxes = Some(std::mem::replace(&mut log, FluxLog::zeros(field.t, n + 1)));
            snapshots.push(snap);
        }

        let scale = conservation_scale(&self.eos, &field, &self.far);
        let audit = ConservationAudit::new(start_totals, field.totals(), inflow, scale);
        Ok(RunOutput {
            snapshots,
            steps,
            floor_events: field.floor_events - initial.floor_events,
            audit,
            warnings,
        })
    }
}

/// Sorted output times strictly after `t0`, always ending at `t_end`.
pub(crate) fn output_schedule(t0: f64, t_end: f64, output_times: &[f64]) -> Result<Vec<f64>> {
    let mut targets = Vec::with_capacity(output_times.len() + 1);
    for &t in output_times {
        if !(t.is_finite() && t <= t_end * (1.0 + 1e-12)) {
            return Err(Error::config("output_times", format!("{t} exceeds t_end = {t_end}")));
        }
        if let Some(&last) = targets.last() {
            if t < last {
                return Err(Error::config("output_times", "output times must be sorted"));
            }
            if t == last {
                continue;
            }
        }
        if t > t0 {
            targets.push(t.min(t_end));
        }
    }
    if t_end > t0 && targets.last().map_or(true, |&l| l < t_end) {
        targets.push(t_end);
    }
    Ok(targets)
}

/// Scale used to turn conservation drift into a relative number.
pub(crate) fn conservation_scale(eos: &GammaLawEos, field: &SolutionField, far: &FarField) -> [f64; 2] {
    let len = field.grid.length();
    let rho_max = far.left.rho.max(far.right.rho);
    let c = eos.sound_speed_unchecked(rho_max);
    let u_max = far.left.u.abs().max(far.right.u.abs());
    [rho_max * len, rho_max * (u_max + c) * len]
}

/// Reports a disturbance inside the outer 5% of the domain.
pub(crate) fn boundary_disturbance(
    eos: &GammaLawEos,
    field: &SolutionField,
    far: &FarField,
) -> Option<String> {
    let n = field.len();
    let band = ((0.05 * n as f64).ceil() as usize).max(1);
    let check = |i: usize, s: PointState| {
        let scale_u = s.u.abs() + eos.sound_speed_unchecked(s.rho);
        let st = field.state(i);
        (st.rho - s.rho).abs() / s.rho + (st.u - s.u).abs() / scale_u.max(1e-300)
    };
    let left = (0..band).map(|i| check(i, far.left)).fold(0.0, f64::max);
    let right = (n - band..n).map(|i| check(i, far.right)).fold(0.0, f64::max);
    let worst = left.max(right);
    if worst > 1e-6 {
        Some(format!(
            "wave within 5% of the boundary at t = {:.4} (relative deviation {:.2e})",
            field.t, worst
        ))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eos2() -> GammaLawEos {
        GammaLawEos::new(2.0).unwrap()
    }

    #[test]
    fn euler_flux_examples() {
        let e = eos2();
        assert_eq!(euler_flux(&e, PointState::new(1.0, 0.0)), [0.0, 0.125]);
        assert_eq!(euler_flux(&e, PointState::vacuum()), [0.0, 0.0]);
        assert_eq!(euler_flux(&e, PointState::new(1.0, 1.0)), [1.0, 1.125]);
    }

    #[test]
    fn rusanov_consistency_and_symmetry() {
        let e = eos2();
        let s = PointState::new(0.8, -0.3);
        let f = numerical_flux(&e, s, s);
        let g = euler_flux(&e, s);
        assert!((f[0] - g[0]).abs() < 1e-15 && (f[1] - g[1]).abs() < 1e-15);
        let f = numerical_flux(&e, PointState::new(1.0, 0.2), PointState::new(1.0, -0.2));
        assert!(f[0].abs() < 1e-16);
    }

    #[test]
    fn rusanov_hand_value() {
        // left (1, -2), right (0.5, -2): a = max(2 + 0.5, 2 + 0.5 sqrt(0.5))
        let e = eos2();
        let (l, r) = (PointState::new(1.0, -2.0), PointState::new(0.5, -2.0));
        let f = numerical_flux(&e, l, r);
        let a = 2.5;
        let mass = 0.5 * (-2.0 + -1.0) - 0.5 * a * (0.5 - 1.0);
        let mom = 0.5 * ((4.0 + 0.125) + (2.0 + 0.125 * 0.25)) - 0.5 * a * (-1.0 - -2.0);
        assert!((f[0] - mass).abs() < 1e-15);
        assert!((f[1] - mom).abs() < 1e-15);
    }

    #[test]
    fn viscous_term_examples() {
        let p = ViscousParams::new(1.0, 1.0).unwrap();
        let v = viscous_term(&[1.0, 1.0, 1.0], &[0.0, 1.0, 0.0], 1.0, &p);
        assert_eq!(v, vec![0.0, -2.0, 0.0]);
        let v = viscous_term(&[1.0; 6], &[0.3; 6], 0.1, &p);
        assert!(v.iter().all(|&x| x == 0.0));
        let u: Vec<f64> = (0..6).map(|i| 0.2 * i as f64).collect();
        let v = viscous_term(&[2.0; 6], &u, 0.1, &p);
        assert!(v.iter().all(|&x| x.abs() < 1e-12));
    }

    #[test]
    fn stable_dt_uniform_state() {
        let e = eos2();
        let g = Grid::new(-1.0, 1.0, 100).unwrap();
        let s = PointState::new(1.0, 0.0);
        let far = FarField::new(s, s).unwrap();
        let f = SolutionField::constant(g, s);
        let dx = g.dx();
        let p = ViscousParams::new(1e-3, 1.0).unwrap();
        let dt = stable_dt(&e, &f, &far, &p, 0.4, 1e-10).unwrap();
        assert!((dt - 0.4 * (dx / 0.5).min(dx * dx / 2e-3)).abs() < 1e-15);
        let p0 = ViscousParams::new(0.0, 1.0).unwrap();
        let dt0 = stable_dt(&e, &f, &far, &p0, 0.4, 1e-10).unwrap();
        assert!((dt0 - 0.4 * dx / 0.5).abs() < 1e-15);
        // viscous-limited: doubling eps halves dt
        let pa = ViscousParams::new(1.0, 1.0).unwrap();
        let pb = ViscousParams::new(2.0, 1.0).unwrap();
        let da = stable_dt(&e, &f, &far, &pa, 0.4, 1e-10).unwrap();
        let db = stable_dt(&e, &f, &far, &pb, 0.4, 1e-10).unwrap();
        assert!((da / db - 2.0).abs() < 1e-12);
        assert!(stable_dt(&e, &f, &far, &p, 0.0, 1e-10).is_err());
    }

    #[test]
    fn constant_state_is_fixed_point() {
        let e = eos2();
        let g = Grid::new(-1.0, 1.0, 32).unwrap();
        let s = PointState::new(0.7, 0.25);
        let far = FarField::new(s, s).unwrap();
        let solver = ViscousSolver::new(e, ViscousParams::new(1e-2, 1.0).unwrap(), far, 0.4).unwrap();
        let f = SolutionField::constant(g, s);
        let out = solver.run(&f, 0.3, &[0.1, 0.2], |_, _| {}).unwrap();
        assert_eq!(out.snapshots.len(), 4);
        for snap in &out.snapshots {
            for i in 0..g.n_cells {
                assert!((snap.rho[i] - 0.7).abs() < 1e-15);
                assert!((snap.m[i] - 0.7 * 0.25).abs() < 1e-15);
            }
        }
        assert_eq!(out.floor_events, 0);
    }

    #[test]
    fn t_end_zero_returns_initial_only() {
        let e = eos2();
        let g = Grid::new(-1.0, 1.0, 16).unwrap();
        let s = PointState::new(1.0, 0.0);
        let far = FarField::new(s, s).unwrap();
        let solver = ViscousSolver::new(e, ViscousParams::new(1e-2, 1.0).unwrap(), far, 0.4).unwrap();
        let out = solver.run(&SolutionField::constant(g, s), 0.0, &[], |_, _| {}).unwrap();
        assert_eq!(out.snapshots.len(), 1);
        assert_eq!(out.steps, 0);
    }

    #[test]
    fn smooth_step_properties() {
        assert_eq!(smooth_step(-1.0), 0.0);
        assert_eq!(smooth_step(1.0), 1.0);
        assert!((smooth_step(0.0) - 0.5).abs() < 1e-15);
        for z in [-0.9, -0.3, 0.2, 0.77] {
            assert!((smooth_step(z) + smooth_step(-z) - 1.0).abs() < 1e-15);
            let h = 1e-6;
            let fd = (smooth_step(z + h) - smooth_step(z - h)) / (2.0 * h);
            assert!((fd - smooth_step_derivative(z)).abs() < 1e-7);
        }
    }

    #[test]
    fn mollified_data_examples() {
        let g = Grid::new(-1.0, 1.0, 200).unwrap();
        let s = PointState::new(1.0, 0.0);
        let f = mollified_riemann_data(&g, &FarField::new(s, s).unwrap(), 0.1).unwrap();
        assert!(f.rho.iter().all(|&r| r == 1.0));
        let far = FarField::new(PointState::new(1.0, -0.4), PointState::new(1.0, 0.4)).unwrap();
        let f = mollified_riemann_data(&g, &far, 0.1).unwrap();
        let u = f.velocity();
        for i in 0..100 {
            assert!((u[i] + u[199 - i]).abs() < 1e-14);
        }
        assert!(mollified_riemann_data(&g, &far, 0.015).is_err());
    }

    #[test]
    fn preflight_catches_small_domain() {
        let e = eos2();
        let far = FarField::new(PointState::new(1.0, 0.0), PointState::new(0.125, 0.0)).unwrap();
        let g = Grid::new(-0.3, 0.3, 64).unwrap();
        assert!(preflight_wave_arrival(&e, &far, &g, 0.05, 0.4).is_err());
        let g = Grid::new(-1.0, 1.0, 64).unwrap();
        assert!(preflight_wave_arrival(&e, &far, &g, 0.05, 0.4).is_ok());
    }

    #[test]
    fn convergence_range_flag() {
        let p = ViscousParams::new(1e-2, 1.0).unwrap();
        assert!(p.in_convergence_range(2.0));
        assert!(!ViscousParams::new(1e-2, 0.5).unwrap().in_convergence_range(2.0));
        assert!(!ViscousParams::new(1e-2, 2.5).unwrap().in_convergence_range(2.0));
        assert!(ViscousParams::new(-1.0, 1.0).is_err());
    }
}
