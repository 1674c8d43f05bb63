//! Oracles written independently of the library: tanh-sinh quadrature and a bisection Riemann
//! solver with its own self-similar sampler.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

/// Tanh-sinh sum for `∫_{-1}^{1} g(t) (1 - t^2)^lambda dt` at step `h`.
///
/// With `t = tanh(pi/2 sinh x)` the weight `1 - t^2 = sech^2(pi/2 sinh x)` is formed without
/// cancellation, so endpoint singularities (`lambda > -1`) are harmless.
fn tanh_sinh_sum(lambda: f64, g: &impl Fn(f64) -> f64, h: f64) -> f64 {
    let mut sum = 0.0;
    let x_max = 6.5;
    let n = (x_max / h).ceil() as i64;
    for k in -n..=n {
        let x = k as f64 * h;
        let v = FRAC_PI_2 * x.sinh();
        let t = v.tanh();
        let sech = 1.0 / v.cosh();
        let w = FRAC_PI_2 * x.cosh() * sech.powf(2.0 * lambda + 2.0);
        if w == 0.0 || !w.is_finite() || t.abs() >= 1.0 {
            continue;
        }
        sum += w * g(t);
    }
    sum * h
}

/// `∫_{-1}^{1} g(t) (1 - t^2)^lambda dt`, refining until two levels agree to `tol` (relative to
/// the integral of `|g|` scale).
pub fn tanh_sinh_weighted(lambda: f64, g: impl Fn(f64) -> f64, tol: f64) -> f64 {
    let mut h = 0.5;
    let mut prev = tanh_sinh_sum(lambda, &g, h);
    for _ in 0..10 {
        h *= 0.5;
        let next = tanh_sinh_sum(lambda, &g, h);
        if (next - prev).abs() <= tol * next.abs().max(1e-300) {
            return next;
        }
        prev = next;
    }
    prev
}

/// `∫_a^b f(x) dx` by tanh-sinh.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    half * tanh_sinh_weighted(0.0, |t| f(mid + half * t), tol)
}

/// `∫_a^b f` split at interior `cuts`.
pub fn tanh_sinh_split(f: impl Fn(f64) -> f64, a: f64, b: f64, cuts: &[f64], tol: f64) -> f64 {
    let mut pts = vec![a];
    pts.extend(cuts.iter().copied().filter(|&c| c > a && c < b));
    pts.push(b);
    pts.windows(2).map(|w| tanh_sinh(&f, w[0], w[1], tol)).sum()
}

/// `γ`-law gas with `κ = (γ-1)^2/(4γ)`, so that `c = θ ρ^θ` and the Riemann invariants are
/// `u ± ρ^θ`.
#[derive(Debug, Clone, Copy)]
pub struct Gas {
    pub gamma: f64,
}

impl Gas {
    pub fn theta(&self) -> f64 {
        0.5 * (self.gamma - 1.0)
    }

    pub fn lambda(&self) -> f64 {
        (3.0 - self.gamma) / (2.0 * (self.gamma - 1.0))
    }

    pub fn kappa(&self) -> f64 {
        (self.gamma - 1.0).powi(2) / (4.0 * self.gamma)
    }

    pub fn p(&self, rho: f64) -> f64 {
        self.kappa() * rho.powf(self.gamma)
    }

    pub fn c(&self, rho: f64) -> f64 {
        (self.gamma * self.p(rho) / rho).sqrt()
    }

    /// Velocity jump across the wave connecting `rho_k` to `rho` (rarefaction or shock branch).
    fn wave_jump(&self, rho: f64, rho_k: f64) -> f64 {
        if rho <= rho_k {
            rho.powf(self.theta()) - rho_k.powf(self.theta())
        } else {
            ((self.p(rho) - self.p(rho_k)) * (rho - rho_k) / (rho * rho_k)).sqrt()
        }
    }

    pub fn mechanical_energy(&self, rho: f64, u: f64) -> (f64, f64) {
        let e = self.kappa() * rho.powf(self.gamma) / (self.gamma - 1.0);
        let h = self.kappa() * self.gamma / (self.gamma - 1.0) * rho.powf(self.gamma - 1.0);
        let m = rho * u;
        (0.5 * rho * u * u + e, 0.5 * m * u * u + m * h)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct OracleSolution {
    pub gas: Gas,
    pub left: (f64, f64),
    pub right: (f64, f64),
    pub star_rho: f64,
    pub star_u: f64,
    pub vacuum: bool,
}

/// Star state by bisection on the monotone function `f_L(ρ) + f_R(ρ) + u_R - u_L`.
pub fn bisection_riemann(gas: Gas, left: (f64, f64), right: (f64, f64)) -> OracleSolution {
    let (rl, ul) = left;
    let (rr, ur) = right;
    let phi = |rho: f64| gas.wave_jump(rho, rl) + gas.wave_jump(rho, rr) + ur - ul;
    if phi(0.0) >= 0.0 {
        return OracleSolution {
            gas,
            left,
            right,
            star_rho: 0.0,
            star_u: f64::NAN,
            vacuum: true,
        };
    }
    let mut lo = 0.0;
    let mut hi = rl.max(rr);
    while phi(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = 0.5 * (lo + hi);
    let u = 0.5 * (ul + ur) + 0.5 * (gas.wave_jump(rho, rr) - gas.wave_jump(rho, rl));
    OracleSolution {
        gas,
        left,
        right,
        star_rho: rho,
        star_u: u,
        vacuum: false,
    }
}

impl OracleSolution {
    /// `(rho, u)` at `xi = x / t`.
    pub fn sample(&self, xi: f64) -> (f64, f64) {
        let g = self.gas;
        let th = g.theta();
        let (rl, ul) = self.left;
        let (rr, ur) = self.right;
        let w = ul + rl.powf(th);
        let z = ur - rr.powf(th);
        let fan1 = |xi: f64| {
            let r = ((w - xi) / (1.0 + th)).max(0.0).powf(1.0 / th);
            (r, w - r.powf(th))
        };
        let fan2 = |xi: f64| {
            let r = ((xi - z) / (1.0 + th)).max(0.0).powf(1.0 / th);
            (r, z + r.powf(th))
        };
        if self.vacuum {
            return if xi <= ul - g.c(rl) {
                self.left
            } else if xi < w {
                fan1(xi)
            } else if xi <= z {
                (0.0, 0.0)
            } else if xi < ur + g.c(rr) {
                fan2(xi)
            } else {
                self.right
            };
        }
        let (rs, us) = (self.star_rho, self.star_u);
        if xi < us {
            if rs > rl {
                let s = (rs * us - rl * ul) / (rs - rl);
                if xi < s {
                    self.left
                } else {
                    (rs, us)
                }
            } else if xi <= ul - g.c(rl) {
                self.left
            } else if xi >= us - g.c(rs) {
                (rs, us)
            } else {
                fan1(xi)
            }
        } else if rs > rr {
            let s = (rs * us - rr * ur) / (rs - rr);
            if xi > s {
                self.right
            } else {
                (rs, us)
            }
        } else if xi >= ur + g.c(rr) {
            self.right
        } else if xi <= us + g.c(rs) {
            (rs, us)
        } else {
            fan2(xi)
        }
    }
}
