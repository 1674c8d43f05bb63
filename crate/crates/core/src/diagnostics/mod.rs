//! Functionals measured on viscous runs: relative energy, viscous dissipation, density-gradient
//! weights, local higher integrability, initial-data admissibility, entropy residuals and the
//! distance to the exact inviscid solution.
//!
//! Space integrals use the midpoint rule on cell averages; time integrals over snapshot series use
//! the trapezoid rule; per-step accumulators use the step sizes of the solver.

mod report;
mod residual;

pub use report::{
    DiagnosticsReport, InitialDataReport, L1Row, ResidualSummary, UniformityRow, REPORT_SCHEMA_VERSION,
};
pub use residual::{entropy_residual, Bump2d, ResidualField, SpaceTimeBox};

use serde::{Deserialize, Serialize};

use crate::eos::{GammaLawEos, PointState};
use crate::error::{Error, Result};
use crate::field::{FarField, SolutionField};
use crate::riemann::{sample, WaveStructure};
use crate::viscous::{smooth_step, smooth_step_derivative, ViscousParams};

/// Smooth monotone reference profile equal to the far-field states for `|x| >= l0`.
///
/// Both components follow `left + (right - left) S(x / w)` with `w = l0 / steepness` and `S` the
/// `C^inf` step of [`smooth_step`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferencePair {
    pub far: FarField,
    pub l0: f64,
    pub steepness: f64,
}

pub fn make_reference(far: FarField, l0: f64, steepness: f64) -> Result<ReferencePair> {
    if !(l0 > 0.0 && l0.is_finite()) {
        return Err(Error::config("reference.l0", format!("must be positive, got {l0}")));
    }
    if !(steepness >= 1.0 && steepness.is_finite()) {
        return Err(Error::config("reference.steepness", format!("must be at least 1, got {steepness}")));
    }
    Ok(ReferencePair { far, l0, steepness })
}

impl ReferencePair {
    fn width(&self) -> f64 {
        self.l0 / self.steepness
    }

    pub fn rho_bar(&self, x: f64) -> f64 {
        let (a, b) = (self.far.left.rho, self.far.right.rho);
        a + (b - a) * smooth_step(x / self.width())
    }

    pub fn u_bar(&self, x: f64) -> f64 {
        let (a, b) = (self.far.left.u, self.far.right.u);
        a + (b - a) * smooth_step(x / self.width())
    }

    pub fn rho_bar_x(&self, x: f64) -> f64 {
        let w = self.width();
        (self.far.right.rho - self.far.left.rho) * smooth_step_derivative(x / w) / w
    }
}

/// `∫ (rho |u - u_bar|^2 / 2 + e*(rho, rho_bar)) dx`.
pub fn total_energy(eos: &GammaLawEos, field: &SolutionField, reference: &ReferencePair) -> f64 {
    let dx = field.grid.dx();
    (0..field.len())
        .map(|i| {
            let x = field.grid.center(i);
            let s = field.state(i);
            let du = s.u - reference.u_bar(x);
            0.5 * s.rho * du * du + eos.relative_energy_unchecked(s.rho, reference.rho_bar(x))
        })
        .sum::<f64>()
        * dx
}

/// `dt eps sum_faces mu_face (D+ u)^2 dx` over interior faces, with the face viscosity of the
/// solver.
pub fn dissipation_increment(field: &SolutionField, params: &ViscousParams, dt: f64) -> f64 {
    if params.epsilon == 0.0 || field.len() < 2 {
        return 0.0;
    }
    let dx = field.grid.dx();
    let u = field.velocity();
    let mut sum = 0.0;
    let mut prev = field.rho[0].powf(params.alpha);
    for j in 1..field.len() {
        let next = field.rho[j].powf(params.alpha);
        let du = (u[j] - u[j - 1]) / dx;
        sum += 0.5 * (prev + next) * du * du;
        prev = next;
    }
    dt * params.epsilon * sum * dx
}

/// `rho_x` by central differences, one-sided at the two end cells.
pub fn density_gradient(field: &SolutionField) -> Vec<f64> {
    let n = field.len();
    let dx = field.grid.dx();
    let r = &field.rho;
    (0..n)
        .map(|i| {
            if i == 0 {
                (r[1] - r[0]) / dx
            } else if i == n - 1 {
                (r[n - 1] - r[n - 2]) / dx
            } else {
                (r[i + 1] - r[i - 1]) / (2.0 * dx)
            }
        })
        .collect()
}

/// `(eps^2 ∫ rho^(2 alpha - 3) rho_x^2 dx, eps ∫ rho^(alpha + gamma - 3) rho_x^2 dx)`.
pub fn gradient_functionals(field: &SolutionField, params: &ViscousParams, eos: &GammaLawEos) -> (f64, f64) {
    let dx = field.grid.dx();
    let (mut a, mut b) = (0.0, 0.0);
    for (&rho, g) in field.rho.iter().zip(density_gradient(field)) {
        if g == 0.0 {
            continue;
        }
        let g2 = g * g;
        a += rho.powf(2.0 * params.alpha - 3.0) * g2;
        b += rho.powf(params.alpha + eos.gamma() - 3.0) * g2;
    }
    let e = params.epsilon;
    (e * e * a * dx, e * b * dx)
}

/// Time trapezoid of `f(snapshot)` over a series sorted in time.
fn time_trapezoid(series: &[SolutionField], f: impl Fn(&SolutionField) -> f64) -> f64 {
    let values: Vec<f64> = series.iter().map(&f).collect();
    series
        .windows(2)
        .zip(values.windows(2))
        .map(|(s, v)| 0.5 * (s[1].t - s[0].t) * (v[0] + v[1]))
        .sum()
}

fn check_series(series: &[SolutionField]) -> Result<()> {
    if series.windows(2).any(|w| w[1].t < w[0].t || w[1].grid != w[0].grid) {
        return Err(Error::config("series", "snapshots must share a grid and be sorted in time"));
    }
    Ok(())
}

/// `∫∫_{[a, b]} rho^(gamma + 1) dx dt` over the span of the series.
pub fn higher_integrability(eos: &GammaLawEos, series: &[SolutionField], a: f64, b: f64) -> Result<f64> {
    let Some(first) = series.first() else {
        return Ok(0.0);
    };
    check_series(series)?;
    let cells = first.grid.cells_in(a, b)?;
    let dx = first.grid.dx();
    let g = eos.gamma();
    Ok(time_trapezoid(series, |s| {
        s.rho[cells.clone()].iter().map(|r| r.powf(g + 1.0)).sum::<f64>() * dx
    }))
}

/// `∫∫_K (rho^(gamma + theta) + rho |u|^3) dx dt` over the span of the series.
pub fn local_flux_functional(eos: &GammaLawEos, series: &[SolutionField], k: (f64, f64)) -> Result<f64> {
    let Some(first) = series.first() else {
        return Ok(0.0);
    };
    check_series(series)?;
    let cells = first.grid.cells_in(k.0, k.1)?;
    let dx = first.grid.dx();
    let p = eos.gamma() + eos.theta();
    Ok(time_trapezoid(series, |s| {
        cells
            .clone()
            .map(|i| {
                let st = s.state(i);
                st.rho.powf(p) + st.rho * st.u.abs().powi(3)
            })
            .sum::<f64>()
            * dx
    }))
}

/// Admissibility numbers of an initial profile. `E1` is infinite when the density reaches
/// `rho_floor`.
pub fn validate_initial(
    eos: &GammaLawEos,
    field: &SolutionField,
    reference: &ReferencePair,
    params: &ViscousParams,
    rho_floor: f64,
) -> InitialDataReport {
    let dx = field.grid.dx();
    let c0 = field.min_density();
    let m0 = (0..field.len())
        .map(|i| {
            let s = field.state(i);
            s.rho * (s.u - reference.u_bar(field.grid.center(i))).abs()
        })
        .sum::<f64>()
        * dx;
    let e0 = total_energy(eos, field, reference);
    let floor_hit = !(c0 > rho_floor);
    let e1 = if floor_hit {
        f64::INFINITY
    } else {
        gradient_functionals(field, params, eos).0
    };
    InitialDataReport {
        m0,
        e0,
        e1,
        c0,
        floor_hit,
    }
}

/// `(∫ |rho - rho_exact| dx, ∫ |m - m_exact| dx)` over `[a, b]` at time `t`, sampling the exact
/// solution at cell centres.
pub fn l1_distance(
    eos: &GammaLawEos,
    field: &SolutionField,
    waves: &WaveStructure,
    interval: (f64, f64),
    t: f64,
) -> Result<(f64, f64)> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("distance to a self-similar solution needs t > 0, got {t}")));
    }
    let cells = field.grid.cells_in(interval.0, interval.1)?;
    let dx = field.grid.dx();
    let (mut dr, mut dm) = (0.0, 0.0);
    for i in cells {
        let exact: PointState = sample(eos, waves, field.grid.center(i) / t);
        dr += (field.rho[i] - exact.rho).abs();
        dm += (field.m[i] - exact.m()).abs();
    }
    Ok((dr * dx, dm * dx))
}

/// Per-step accumulators for the time integrals the solver alone can resolve.
#[derive(Debug, Clone)]
pub struct StepIntegrals {
    eos: GammaLawEos,
    params: ViscousParams,
    /// `eps ∫∫ rho^alpha u_x^2`.
    pub dissipation: f64,
    /// `eps ∫∫ rho^(alpha + gamma - 3) rho_x^2`.
    pub grad_cum: f64,
}

impl StepIntegrals {
    pub fn new(eos: GammaLawEos, params: ViscousParams) -> Self {
        Self {
            eos,
            params,
            dissipation: 0.0,
            grad_cum: 0.0,
        }
    }

    /// Adds the contribution of a step of size `dt` starting from `field`.
    pub fn observe(&mut self, field: &SolutionField, dt: f64) {
        self.dissipation += dissipation_increment(field, &self.params, dt);
        self.grad_cum += dt * gradient_functionals(field, &self.params, &self.eos).1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid;
    use crate::riemann::{solve_riemann, RiemannData};

    fn eos2() -> GammaLawEos {
        GammaLawEos::new(2.0).unwrap()
    }

    fn field_from(grid: Grid, rho: Vec<f64>, u: Vec<f64>) -> SolutionField {
        let m = rho.iter().zip(&u).map(|(r, u)| r * u).collect();
        SolutionField::new(grid, 0.0, rho, m).unwrap()
    }

    #[test]
    fn reference_clamps_to_far_field() {
        let far = FarField::new(PointState::new(1.0, 0.0), PointState::new(0.125, 0.0)).unwrap();
        let r = make_reference(far, 0.5, 2.0).unwrap();
        assert_eq!(r.rho_bar(-0.5), 1.0);
        assert_eq!(r.rho_bar(0.5), 0.125);
        assert_eq!(r.rho_bar(-0.25), 1.0);
        let xs: Vec<f64> = (0..200).map(|i| -0.6 + 1.2 * i as f64 / 199.0).collect();
        assert!(xs.windows(2).all(|w| r.rho_bar(w[1]) <= r.rho_bar(w[0])));
        let same = FarField::new(PointState::new(0.7, 0.2), PointState::new(0.7, 0.2)).unwrap();
        let r = make_reference(same, 0.5, 1.0).unwrap();
        assert!(xs.iter().all(|&x| r.rho_bar(x) == 0.7 && r.u_bar(x) == 0.2 && r.rho_bar_x(x) == 0.0));
        assert!(make_reference(far, 0.0, 1.0).is_err());
    }

    #[test]
    fn energy_of_reference_is_zero_and_one_cell_bump() {
        let eos = eos2();
        let g = Grid::new(-1.0, 1.0, 40).unwrap();
        let far = FarField::new(PointState::new(1.0, 0.3), PointState::new(0.5, -0.1)).unwrap();
        let r = make_reference(far, 0.5, 1.0).unwrap();
        let xs = g.centers();
        let rho: Vec<f64> = xs.iter().map(|&x| r.rho_bar(x)).collect();
        let mut u: Vec<f64> = xs.iter().map(|&x| r.u_bar(x)).collect();
        let f = field_from(g, rho.clone(), u.clone());
        assert!(total_energy(&eos, &f, &r).abs() < 1e-15);
        u[17] += 0.2;
        let f = field_from(g, rho.clone(), u);
        let e = total_energy(&eos, &f, &r);
        assert!((e - 0.5 * rho[17] * 0.04 * g.dx()).abs() < 1e-15);
    }

    #[test]
    fn dissipation_examples() {
        let g = Grid::new(0.0, 8.0, 8).unwrap();
        let p = ViscousParams::new(1.0, 1.0).unwrap();
        let f = field_from(g, vec![1.0; 8], vec![0.4; 8]);
        assert_eq!(dissipation_increment(&f, &p, 1.0), 0.0);
        let mut u = vec![0.0; 8];
        u[4..].iter_mut().for_each(|v| *v = 1.0);
        let f = field_from(g, vec![1.0; 8], u);
        assert!((dissipation_increment(&f, &p, 1.0) - 1.0).abs() < 1e-15);
        let p0 = ViscousParams::new(0.0, 1.0).unwrap();
        assert_eq!(dissipation_increment(&f, &p0, 1.0), 0.0);
    }

    #[test]
    fn gradient_functionals_ramp() {
        let eos = eos2();
        let g = Grid::new(0.0, 8.0, 8).unwrap();
        let rho: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        let f = field_from(g, rho, vec![0.0; 8]);
        let p = ViscousParams::new(1.0, 1.0).unwrap();
        let (a, b) = gradient_functionals(&f, &p, &eos);
        let harmonic: f64 = (1..=8).map(|i| 1.0 / i as f64).sum();
        assert!((a - harmonic).abs() < 1e-14);
        assert!((b - 8.0).abs() < 1e-14);
        let flat = field_from(g, vec![2.0; 8], vec![0.0; 8]);
        assert_eq!(gradient_functionals(&flat, &p, &eos), (0.0, 0.0));
    }

    #[test]
    fn space_time_functionals() {
        let eos = eos2();
        let g = Grid::new(-1.0, 1.0, 20).unwrap();
        let mut a = SolutionField::constant(g, PointState::new(1.0, 0.0));
        let mut b = a.clone();
        b.t = 1.0;
        assert!((higher_integrability(&eos, &[a.clone(), b.clone()], 0.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((local_flux_functional(&eos, &[a.clone(), b.clone()], (0.0, 1.0)).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(higher_integrability(&eos, &[a.clone()], 0.0, 1.0).unwrap(), 0.0);
        assert!(higher_integrability(&eos, &[a.clone(), b.clone()], 0.0, 2.0).is_err());
        // rho = 2 at t = 1 on the interval: (1 + 8) / 2
        b.rho.iter_mut().for_each(|r| *r = 2.0);
        assert!((higher_integrability(&eos, &[a.clone(), b.clone()], 0.0, 1.0).unwrap() - 4.5).abs() < 1e-13);
        a.rho.iter_mut().for_each(|r| *r = 0.0);
        b.rho.iter_mut().for_each(|r| *r = 0.0);
        assert_eq!(local_flux_functional(&eos, &[a, b], (-1.0, 1.0)).unwrap(), 0.0);
    }

    #[test]
    fn validator_on_reference_profile() {
        let eos = eos2();
        let g = Grid::new(-1.0, 1.0, 400).unwrap();
        let far = FarField::new(PointState::new(1.0, 0.0), PointState::new(0.125, 0.0)).unwrap();
        let r = make_reference(far, 0.5, 1.0).unwrap();
        let rho: Vec<f64> = g.centers().iter().map(|&x| r.rho_bar(x)).collect();
        let f = field_from(g, rho, vec![0.0; 400]);
        let p = ViscousParams::new(1e-2, 1.0).unwrap();
        let rep = validate_initial(&eos, &f, &r, &p, 1e-10);
        assert_eq!(rep.m0, 0.0);
        assert!(rep.e0.abs() < 1e-15);
        assert!(rep.e1 > 0.0 && rep.e1.is_finite());
        assert!(!rep.floor_hit);
    }

    #[test]
    fn l1_distance_examples() {
        let eos = eos2();
        let g = Grid::new(-1.0, 1.0, 64).unwrap();
        let s = PointState::new(1.0, 0.0);
        let w = solve_riemann(&eos, &RiemannData { left: s, right: s }).unwrap();
        let f = SolutionField::constant(g, s);
        assert_eq!(l1_distance(&eos, &f, &w, (-1.0, 1.0), 0.1).unwrap(), (0.0, 0.0));
        let mut f2 = f.clone();
        f2.rho.iter_mut().for_each(|r| *r += 0.01);
        let (dr, _) = l1_distance(&eos, &f2, &w, (0.0, 1.0), 0.1).unwrap();
        assert!((dr - 0.01).abs() < 1e-14);
        assert!(l1_distance(&eos, &f, &w, (-1.0, 1.0), 0.0).is_err());
        assert!(l1_distance(&eos, &f, &w, (-2.0, 1.0), 0.1).is_err());
    }
}
