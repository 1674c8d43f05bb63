//! Entropy residual `R = D_t eta + D_x Q` on the snapshot lattice and its norms.
//!
//! `R` lives at (cell centre, interval midpoint). The time difference is exact on snapshots. The
//! flux `Q` includes the viscous entropy flux `-eps eta_m mu u_x`, so for the viscous system `R` is
//! the entropy dissipation. For affine generators the pair is a combination of mass and momentum
//! and `Q` is built from the solver's logged face fluxes, which makes `R` the conservation defect
//! (zero up to roundoff). Otherwise `Q` is the time-trapezoid of face averages of `q`.

use rustfft::num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::entropy::{EntropyGenerator, EntropyKernel};
use crate::error::{Error, Result};
use crate::field::SolutionField;
use crate::viscous::ViscousParams;

/// Space-time rectangle `[x0, x1] x [t0, t1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeBox {
    pub x: (f64, f64),
    pub t: (f64, f64),
}

/// Nonnegative test function `b((x - x0) / wx) b((t - t0) / wt)` with `b(z) = (1 - z^2)^3` on
/// `|z| < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bump2d {
    pub x0: f64,
    pub wx: f64,
    pub t0: f64,
    pub wt: f64,
}

impl Bump2d {
    pub fn value(&self, x: f64, t: f64) -> f64 {
        let b = |z: f64| {
            if z.abs() >= 1.0 {
                0.0
            } else {
                let w = 1.0 - z * z;
                w * w * w
            }
        };
        b((x - self.x0) / self.wx) * b((t - self.t0) / self.wt)
    }
}

/// Residual values, row `k` holding the interval `[t_k, t_{k+1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualField {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub dx: f64,
    pub dt: f64,
    pub values: Vec<f64>,
}

impl ResidualField {
    fn row(&self, k: usize) -> &[f64] {
        let n = self.x.len();
        &self.values[k * n..(k + 1) * n]
    }

    /// Index ranges of the columns and rows whose centres lie in the box.
    fn window(&self, b: &SpaceTimeBox) -> Result<(std::ops::Range<usize>, std::ops::Range<usize>)> {
        let pick = |c: &[f64], lo: f64, hi: f64, what: &str| {
            let first = c.iter().position(|&v| v >= lo);
            let last = c.iter().rposition(|&v| v <= hi);
            match (first, last) {
                (Some(a), Some(z)) if a <= z => Ok(a..z + 1),
                _ => Err(Error::domain(format!("box {what}-range [{lo}, {hi}] contains no lattice points"))),
            }
        };
        Ok((pick(&self.x, b.x.0, b.x.1, "x")?, pick(&self.t, b.t.0, b.t.1, "t")?))
    }

    /// `sqrt(hx ht sum R^2)` over the box.
    pub fn l2_norm(&self, b: &SpaceTimeBox) -> Result<f64> {
        let (xs, ts) = self.window(b)?;
        let s: f64 = ts.map(|k| self.row(k)[xs.clone()].iter().map(|v| v * v).sum::<f64>()).sum();
        Ok((s * self.dx * self.dt).sqrt())
    }

    /// Negative-Sobolev norm over the box: the residual restricted to the box is zero-extended to a
    /// periodic box of twice the size in each direction, and
    /// `||R||^2 = hx ht / N sum |R_hat(xi)|^2 / (1 + |xi|^2)` with `N` the padded point count.
    pub fn negative_sobolev_norm(&self, b: &SpaceTimeBox) -> Result<f64> {
        let (xs, ts) = self.window(b)?;
        let (nx, nt) = (2 * xs.len(), 2 * ts.len());
        let mut data = vec![Complex::new(0.0, 0.0); nx * nt];
        for (kk, k) in ts.clone().enumerate() {
            for (ii, v) in self.row(k)[xs.clone()].iter().enumerate() {
                data[kk * nx + ii] = Complex::new(*v, 0.0);
            }
        }
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_forward(nx).process(&mut data);
        // transpose, then transform along time
        let mut tr = vec![Complex::new(0.0, 0.0); nx * nt];
        for k in 0..nt {
            for i in 0..nx {
                tr[i * nt + k] = data[k * nx + i];
            }
        }
        planner.plan_fft_forward(nt).process(&mut tr);
        let freq = |j: usize, n: usize, h: f64| {
            let jj = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
            2.0 * std::f64::consts::PI * jj / (n as f64 * h)
        };
        let mut s = 0.0;
        for i in 0..nx {
            let xi = freq(i, nx, self.dx);
            for k in 0..nt {
                let tau = freq(k, nt, self.dt);
                s += tr[i * nt + k].norm_sqr() / (1.0 + xi * xi + tau * tau);
            }
        }
        Ok((s * self.dx * self.dt / (nx * nt) as f64).sqrt())
    }

    /// `sum R phi hx ht` over the whole lattice.
    pub fn pairing(&self, phi: &Bump2d) -> f64 {
        let mut s = 0.0;
        for (k, &t) in self.t.iter().enumerate() {
            for (v, &x) in self.row(k).iter().zip(&self.x) {
                s += v * phi.value(x, t);
            }
        }
        s * self.dx * self.dt
    }
}

/// Per-snapshot cell data: `eta`, centred `q`, `eta_m`.
struct CellEntropy {
    eta: Vec<f64>,
    q: Vec<f64>,
    eta_m: Vec<f64>,
}

fn cell_entropy(kernel: &EntropyKernel, gen: &EntropyGenerator, s: &SolutionField) -> Result<CellEntropy> {
    let n = s.len();
    let mut out = CellEntropy {
        eta: Vec::with_capacity(n),
        q: Vec::with_capacity(n),
        eta_m: Vec::with_capacity(n),
    };
    for i in 0..n {
        let st = s.state(i);
        let (pair, eta_m) = match kernel.polynomial_pair(gen, st.rho, st.u) {
            Some(v) => v,
            None => {
                let pair = kernel.pair(gen, st.rho, st.u)?;
                let eta_m = if st.rho > 0.0 { kernel.derivatives(gen, st.rho, st.u)?.eta_m } else { 0.0 };
                (pair, eta_m)
            }
        };
        out.eta.push(pair.eta);
        out.q.push(pair.q);
        out.eta_m.push(eta_m);
    }
    Ok(out)
}

/// Face entropy flux (inviscid average minus viscous part) at one snapshot, `n + 1` faces.
fn face_flux(s: &SolutionField, c: &CellEntropy, params: &ViscousParams) -> Vec<f64> {
    let n = s.len();
    let dx = s.grid.dx();
    let u = s.velocity();
    let mut f = vec![0.0; n + 1];
    f[0] = c.q[0];
    f[n] = c.q[n - 1];
    for j in 1..n {
        let mut v = 0.5 * (c.q[j - 1] + c.q[j]);
        if params.epsilon > 0.0 {
            let mu = 0.5 * (s.rho[j - 1].powf(params.alpha) + s.rho[j].powf(params.alpha));
            let eta_m = 0.5 * (c.eta_m[j - 1] + c.eta_m[j]);
            v -= params.epsilon * eta_m * mu * (u[j] - u[j - 1]) / dx;
        }
        f[j] = v;
    }
    f
}

/// Residual of the pair generated by `gen` over a uniformly spaced snapshot series.
pub fn entropy_residual(
    kernel: &EntropyKernel,
    series: &[SolutionField],
    gen: &EntropyGenerator,
    params: &ViscousParams,
) -> Result<ResidualField> {
    if series.len() < 3 {
        return Err(Error::config(
            "output_times",
            format!("entropy residual needs at least 3 snapshots, got {}", series.len()),
        ));
    }
    let grid = series[0].grid;
    let ht = series[1].t - series[0].t;
    for w in series.windows(2) {
        let h = w[1].t - w[0].t;
        if w[1].grid != grid || !(h > 0.0) || (h - ht).abs() > 1e-9 * ht {
            return Err(Error::config(
                "output_times",
                "entropy residual needs uniformly spaced snapshots on one grid",
            ));
        }
    }
    let n = grid.n_cells;
    let dx = grid.dx();
    let cells: Vec<CellEntropy> = series
        .par_iter()
        .map(|s| cell_entropy(kernel, gen, s))
        .collect::<Result<_>>()?;
    let affine = gen.affine_coefficients();
    let mass = kernel.moment_mass();
    let faces: Vec<Vec<f64>> = if affine.is_some() {
        Vec::new()
    } else {
        series.par_iter().zip(&cells).map(|(s, c)| face_flux(s, c, params)).collect()
    };

    let mut values = Vec::with_capacity((series.len() - 1) * n);
    let mut tmid = Vec::with_capacity(series.len() - 1);
    for k in 0..series.len() - 1 {
        let (a, b) = (&series[k], &series[k + 1]);
        let h = b.t - a.t;
        let logged = affine.and_then(|c| b.fluxes.as_ref().map(|l| (c, l)));
        let q: Vec<f64> = match logged {
            Some(((c0, c1), log)) => (0..=n)
                .map(|j| mass * (c0 * log.mass[j] + c1 * log.momentum[j]) / h)
                .collect(),
            None => {
                let fa;
                let fb;
                let (pa, pb) = if faces.is_empty() {
                    fa = face_flux(a, &cells[k], params);
                    fb = face_flux(b, &cells[k + 1], params);
                    (&fa, &fb)
                } else {
                    (&faces[k], &faces[k + 1])
                };
                pa.iter().zip(pb.iter()).map(|(x, y)| 0.5 * (x + y)).collect()
            }
        };
        for i in 0..n {
            values.push((cells[k + 1].eta[i] - cells[k].eta[i]) / h + (q[i + 1] - q[i]) / dx);
        }
        tmid.push(0.5 * (a.t + b.t));
    }
    Ok(ResidualField {
        x: grid.centers(),
        t: tmid,
        dx,
        dt: ht,
        values,
    })
}
