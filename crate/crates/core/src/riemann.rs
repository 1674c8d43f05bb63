//! Exact Riemann solver for the isentropic Euler equations with gamma-law pressure.
//!
//! The star density solves `u_L - phi_L(rho) = u_R + phi_R(rho)`, where `phi_K` is the
//! rarefaction curve `K_c (rho^theta - rho_K^theta)` for `rho <= rho_K` and the Hugoniot curve
//! `sqrt((p - p_K)(rho - rho_K) / (rho rho_K))` otherwise. `K_c = 2 sqrt(kappa gamma)/(gamma-1)`
//! equals one under the canonical pressure constant, making the Riemann invariants `u ± rho^theta`.

use serde::{Deserialize, Serialize};

use crate::eos::{GammaLawEos, PointState};
use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveKind {
    Shock,
    Rarefaction,
    /// Rarefaction whose far edge is vacuum.
    Vacuum,
}

/// One elementary wave occupying the similarity interval `[lo, hi]` (equal for a shock).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub kind: WaveKind,
    pub lo: f64,
    pub hi: f64,
}

/// Exact self-similar solution of a Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveStructure {
    pub left: PointState,
    pub right: PointState,
    pub star_rho: f64,
    pub star_u: f64,
    pub wave1: Wave,
    pub wave2: Wave,
    pub iterations: usize,
}

impl WaveStructure {
    pub fn has_vacuum(&self) -> bool {
        self.wave1.kind == WaveKind::Vacuum
    }

    /// Largest absolute signal speed.
    pub fn max_speed(&self) -> f64 {
        self.wave1.lo.abs().max(self.wave2.hi.abs())
    }
}

/// Left and right states of a Riemann problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannData {
    pub left: PointState,
    pub right: PointState,
}

struct Curves {
    eos: GammaLawEos,
    /// sqrt(kappa gamma), so that c = a rho^theta
    a: f64,
    /// 2 a / (gamma - 1)
    kc: f64,
}

impl Curves {
    fn new(eos: &GammaLawEos) -> Self {
        let a = (eos.kappa() * eos.gamma()).sqrt();
        Self {
            eos: *eos,
            a,
            kc: 2.0 * a / (eos.gamma() - 1.0),
        }
    }

    #[inline]
    fn rpow(&self, rho: f64) -> f64 {
        rho.powf(self.eos.theta())
    }

    /// Velocity change across the wave connecting `k` to density `rho`, and its derivative.
    fn phi(&self, k: PointState, rho: f64) -> (f64, f64) {
        if rho <= k.rho {
            let v = self.kc * (self.rpow(rho) - self.rpow(k.rho));
            let d = if rho > 0.0 {
                self.a * self.rpow(rho) / rho
            } else {
                f64::INFINITY
            };
            (v, d)
        } else {
            let p = self.eos.pressure_unchecked(rho);
            let pk = self.eos.pressure_unchecked(k.rho);
            let dp = self.eos.gamma() * p / rho;
            let inv = 1.0 / k.rho - 1.0 / rho;
            let g = (p - pk) * inv;
            let dg = dp * inv + (p - pk) / (rho * rho);
            let v = g.sqrt();
            let d = if v > 0.0 {
                0.5 * dg / v
            } else {
                self.a * self.rpow(k.rho) / k.rho
            };
            (v, d)
        }
    }
}

/// Exact solution of the Riemann problem with positive end densities.
pub fn solve_riemann(eos: &GammaLawEos, data: &RiemannData) -> Result<WaveStructure> {
    let (l, r) = (data.left, data.right);
    if !(l.rho > 0.0 && r.rho > 0.0 && l.rho.is_finite() && r.rho.is_finite()) {
        return Err(Error::domain(format!(
            "Riemann data needs positive densities, got {} and {}",
            l.rho, r.rho
        )));
    }
    if !(l.u.is_finite() && r.u.is_finite()) {
        return Err(Error::domain("Riemann data has non-finite velocity"));
    }
    let cv = Curves::new(eos);
    let rl = cv.rpow(l.rho);
    let rr = cv.rpow(r.rho);
    let cl = cv.a * rl;
    let cr = cv.a * rr;

    if l == r {
        // degenerate fans on both sides
        return Ok(WaveStructure {
            left: l,
            right: r,
            star_rho: l.rho,
            star_u: l.u,
            wave1: Wave { kind: WaveKind::Rarefaction, lo: l.u - cl, hi: l.u - cl },
            wave2: Wave { kind: WaveKind::Rarefaction, lo: r.u + cr, hi: r.u + cr },
            iterations: 0,
        });
    }

    // u_R - u_L >= K_c (rho_L^theta + rho_R^theta) opens a vacuum
    let gap = l.u - r.u + cv.kc * (rl + rr);
    if gap <= 0.0 {
        let tail1 = l.u + cv.kc * rl;
        let tail2 = r.u - cv.kc * rr;
        return Ok(WaveStructure {
            left: l,
            right: r,
            star_rho: 0.0,
            star_u: 0.5 * (tail1 + tail2),
            wave1: Wave { kind: WaveKind::Vacuum, lo: l.u - cl, hi: tail1 },
            wave2: Wave { kind: WaveKind::Vacuum, lo: tail2, hi: r.u + cr },
            iterations: 0,
        });
    }

    let f = |rho: f64| {
        let (pl, dl) = cv.phi(l, rho);
        let (pr, dr) = cv.phi(r, rho);
        (l.u - r.u - pl - pr, -(dl + dr))
    };
    let scale = l.u.abs() + r.u.abs() + cl + cr;

    // two-rarefaction estimate, exact whenever both waves are rarefactions
    let guess_r = (0.5 * gap / cv.kc).max(0.0);
    let mut rho = guess_r.powf(1.0 / eos.theta());
    let mut lo = 0.0;
    let mut hi = l.rho.max(r.rho).max(rho);
    while f(hi).0 > 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::numeric("could not bracket the star density", gap));
        }
    }
    if !(rho > lo && rho < hi) {
        rho = 0.5 * (lo + hi);
    }

    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_ITERATIONS {
        iterations = it;
        let (val, der) = f(rho);
        residual = val.abs();
        if val > 0.0 {
            lo = rho;
        } else {
            hi = rho;
        }
        if residual <= 1e-15 * scale || val == 0.0 {
            break;
        }
        let mut next = rho - val / der;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - rho).abs() <= 4.0 * f64::EPSILON * rho {
            rho = next;
            residual = f(rho).0.abs();
            break;
        }
        rho = next;
    }
    if !(residual <= 1e-12 * scale.max(1e-300)) {
        return Err(Error::numeric(
            format!("star-state iteration did not converge in {MAX_ITERATIONS} iterations"),
            residual,
        ));
    }

    let star_rho = rho;
    let star_u = 0.5 * ((l.u - cv.phi(l, rho).0) + (r.u + cv.phi(r, rho).0));
    let c_star = cv.a * cv.rpow(star_rho);
    let star_m = star_rho * star_u;

    let wave1 = if star_rho > l.rho {
        let s = (star_m - l.m()) / (star_rho - l.rho);
        Wave { kind: WaveKind::Shock, lo: s, hi: s }
    } else {
        Wave { kind: WaveKind::Rarefaction, lo: l.u - cl, hi: star_u - c_star }
    };
    let wave2 = if star_rho > r.rho {
        let s = (r.m() - star_m) / (r.rho - star_rho);
        Wave { kind: WaveKind::Shock, lo: s, hi: s }
    } else {
        Wave { kind: WaveKind::Rarefaction, lo: star_u + c_star, hi: r.u + cr }
    };

    Ok(WaveStructure {
        left: l,
        right: r,
        star_rho,
        star_u,
        wave1,
        wave2,
        iterations,
    })
}

/// State at similarity coordinate `xi = x / t`.
pub fn sample(eos: &GammaLawEos, waves: &WaveStructure, xi: f64) -> PointState {
    let cv = Curves::new(eos);
    let (l, r) = (waves.left, waves.right);
    let fan = cv.a + cv.kc;
    if waves.has_vacuum() {
        if xi <= waves.wave1.lo {
            return l;
        }
        if xi >= waves.wave2.hi {
            return r;
        }
        if xi < waves.wave1.hi {
            let rp = (l.u + cv.kc * cv.rpow(l.rho) - xi) / fan;
            let rho = rp.max(0.0).powf(1.0 / eos.theta());
            return PointState::new(rho, xi + cv.a * rp);
        }
        if xi > waves.wave2.lo {
            let rp = (xi - (r.u - cv.kc * cv.rpow(r.rho))) / fan;
            let rho = rp.max(0.0).powf(1.0 / eos.theta());
            return PointState::new(rho, xi - cv.a * rp);
        }
        return PointState::vacuum();
    }
    let star = PointState::new(waves.star_rho, waves.star_u);
    if xi <= waves.star_u {
        let w = waves.wave1;
        match w.kind {
            WaveKind::Shock => {
                if xi < w.lo {
                    l
                } else {
                    star
                }
            }
            _ => {
                if xi <= w.lo {
                    l
                } else if xi >= w.hi {
                    star
                } else {
                    // u - c = xi with u + K_c rho^theta constant
                    let rp = (l.u + cv.kc * cv.rpow(l.rho) - xi) / fan;
                    PointState::new(rp.powf(1.0 / eos.theta()), xi + cv.a * rp)
                }
            }
        }
    } else {
        let w = waves.wave2;
        match w.kind {
            WaveKind::Shock => {
                if xi > w.hi {
                    r
                } else {
                    star
                }
            }
            _ => {
                if xi >= w.hi {
                    r
                } else if xi <= w.lo {
                    star
                } else {
                    let rp = (xi - (r.u - cv.kc * cv.rpow(r.rho))) / fan;
                    PointState::new(rp.powf(1.0 / eos.theta()), xi - cv.a * rp)
                }
            }
        }
    }
}

/// Rankine–Hugoniot defect `|s[rho] - [m]| + |s[m] - [rho u^2 + p]|` across a jump of speed `s`.
pub fn rankine_hugoniot_residual(eos: &GammaLawEos, a: PointState, b: PointState, s: f64) -> f64 {
    let flux = |st: PointState| {
        let m = st.m();
        [m, m * st.u + eos.pressure_unchecked(st.rho)]
    };
    let (fa, fb) = (flux(a), flux(b));
    (s * (b.rho - a.rho) - (fb[0] - fa[0])).abs() + (s * (b.m() - a.m()) - (fb[1] - fa[1])).abs()
}
