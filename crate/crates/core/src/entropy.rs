//! Weak entropy pairs of the isentropic Euler system.
//!
//! Every weak entropy pair is generated by a function `psi` through the kernel
//! `chi(rho; s - u) = [rho^(2 theta) - (s - u)^2]_+^lambda`:
//!
//! ```text
//! eta(rho, m) = ∫ chi(rho; s - u) psi(s) ds
//! q(rho, m)   = ∫ (theta s + (1 - theta) u) chi(rho; s - u) psi(s) ds
//! ```
//!
//! After `s = u + rho^theta t` both integrals become `rho * ∫ g(t) (1 - t^2)^lambda dt` over
//! `[-1, 1]`, which is evaluated with Gauss–Jacobi rules. The endpoint factor is singular for
//! `gamma > 3` (negative `lambda`), so exact endpoints are absorbed into the rule weight and
//! interior breakpoints that come close to an endpoint are handled by geometric grading.
//!
//! The pairs are *not* normalized: `psi = 1` gives `eta = M_lambda rho` with
//! `M_lambda = ∫ (1 - t^2)^lambda dt`, and `psi = s^2/2` gives `M_lambda` times the mechanical
//! energy pair.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::eos::GammaLawEos;
use crate::error::{Error, Result};
use crate::quadrature::{jacobi_weight_mass, GaussJacobi};

/// Node count of the primary rule.
pub const PRIMARY_NODES: usize = 64;
/// Node count of the cross-check rule.
pub const CHECK_NODES: usize = 96;
/// Largest tolerated relative disagreement between the two rules.
pub const CROSS_CHECK_TOL: f64 = 1e-9;

/// Generating function `psi` of a weak entropy pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EntropyGenerator {
    /// `c0 + c1 s + c2 s^2`.
    Polynomial { c0: f64, c1: f64, c2: f64 },
    /// `scale * s |s|`.
    SignedSquare { scale: f64 },
    /// `(1 - tau^2)^3` on `[a, b]` with `tau = (2 s - a - b) / (b - a)`; twice continuously
    /// differentiable and zero outside `[a, b]`.
    Bump { a: f64, b: f64 },
}

impl EntropyGenerator {
    pub const fn one() -> Self {
        Self::Polynomial { c0: 1.0, c1: 0.0, c2: 0.0 }
    }

    pub const fn minus_one() -> Self {
        Self::Polynomial { c0: -1.0, c1: 0.0, c2: 0.0 }
    }

    pub const fn s() -> Self {
        Self::Polynomial { c0: 0.0, c1: 1.0, c2: 0.0 }
    }

    pub const fn minus_s() -> Self {
        Self::Polynomial { c0: 0.0, c1: -1.0, c2: 0.0 }
    }

    pub const fn s_squared() -> Self {
        Self::Polynomial { c0: 0.0, c1: 0.0, c2: 1.0 }
    }

    /// Generates `M_lambda` times the mechanical energy pair.
    pub const fn half_s_squared() -> Self {
        Self::Polynomial { c0: 0.0, c1: 0.0, c2: 0.5 }
    }

    /// `s |s| / 2`.
    pub const fn half_s_abs_s() -> Self {
        Self::SignedSquare { scale: 0.5 }
    }

    pub fn bump(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::config("generator", format!("bump support [{a}, {b}] is empty")));
        }
        Ok(Self::Bump { a, b })
    }

    /// The entropy-inequality test family `{±1, ±s, s^2}`.
    pub fn admissibility_family() -> [Self; 5] {
        [Self::one(), Self::minus_one(), Self::s(), Self::minus_s(), Self::s_squared()]
    }

    #[inline]
    pub fn value(&self, s: f64) -> f64 {
        match *self {
            Self::Polynomial { c0, c1, c2 } => c0 + s * (c1 + s * c2),
            Self::SignedSquare { scale } => scale * s * s.abs(),
            Self::Bump { a, b } => {
                if s <= a || s >= b {
                    0.0
                } else {
                    let tau = (2.0 * s - a - b) / (b - a);
                    let w = 1.0 - tau * tau;
                    w * w * w
                }
            }
        }
    }

    /// Closed support, or `None` when unbounded.
    pub fn support(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Bump { a, b } => Some((a, b)),
            _ => None,
        }
    }

    /// Points where `psi` loses smoothness.
    pub fn breakpoints(&self) -> &'static [f64] {
        match self {
            Self::SignedSquare { .. } => &[0.0],
            _ => &[],
        }
    }

    /// `(c0, c1)` when `psi` is affine; the pair is then a combination of mass and momentum.
    pub fn affine_coefficients(&self) -> Option<(f64, f64)> {
        match *self {
            Self::Polynomial { c0, c1, c2 } if c2 == 0.0 => Some((c0, c1)),
            _ => None,
        }
    }
}

impl fmt::Display for EntropyGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Polynomial { c0, c1, c2 } => match (c0, c1, c2) {
                (1.0, 0.0, 0.0) => write!(f, "1"),
                (-1.0, 0.0, 0.0) => write!(f, "-1"),
                (0.0, 1.0, 0.0) => write!(f, "s"),
                (0.0, -1.0, 0.0) => write!(f, "-s"),
                (0.0, 0.0, 1.0) => write!(f, "s^2"),
                (0.0, 0.0, 0.5) => write!(f, "s^2/2"),
                _ => write!(f, "poly({c0},{c1},{c2})"),
            },
            Self::SignedSquare { scale } if scale == 0.5 => write!(f, "s|s|/2"),
            Self::SignedSquare { scale } => write!(f, "signed_square({scale})"),
            Self::Bump { a, b } => write!(f, "bump({a},{b})"),
        }
    }
}

impl FromStr for EntropyGenerator {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let args = |prefix: &str| -> Option<Vec<f64>> {
            let inner = t.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
            inner.split(',').map(|x| x.parse::<f64>().ok()).collect()
        };
        let bad = || Error::config("generator", format!("unrecognized entropy generator `{text}`"));
        match t.as_str() {
            "1" => Ok(Self::one()),
            "-1" => Ok(Self::minus_one()),
            "s" => Ok(Self::s()),
            "-s" => Ok(Self::minus_s()),
            "s^2" => Ok(Self::s_squared()),
            "s^2/2" => Ok(Self::half_s_squared()),
            "s|s|/2" => Ok(Self::half_s_abs_s()),
            _ => {
                if let Some(v) = args("bump") {
                    match v.as_slice() {
                        [a, b] => Self::bump(*a, *b),
                        _ => Err(bad()),
                    }
                } else if let Some(v) = args("poly") {
                    match v.as_slice() {
                        [c0, c1, c2] => Ok(Self::Polynomial { c0: *c0, c1: *c1, c2: *c2 }),
                        _ => Err(bad()),
                    }
                } else if let Some(v) = args("signed_square") {
                    match v.as_slice() {
                        [scale] => Ok(Self::SignedSquare { scale: *scale }),
                        _ => Err(bad()),
                    }
                } else {
                    Err(bad())
                }
            }
        }
    }
}

impl TryFrom<String> for EntropyGenerator {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        value.parse()
    }
}

impl From<EntropyGenerator> for String {
    fn from(value: EntropyGenerator) -> Self {
        value.to_string()
    }
}

/// `(eta, q)` at one state.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EntropyPair {
    pub eta: f64,
    pub q: f64,
}

/// Derivatives of `eta` used by the entropy-dissipation identity.
///
/// `eta_rho`, `eta_m`, `eta_mm` treat `eta` as a function of `(rho, m)`; `eta_mu` and `eta_mrho`
/// differentiate `eta_m` as a function of `(rho, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EntropyDerivatives {
    pub eta_rho: f64,
    pub eta_m: f64,
    pub eta_mm: f64,
    pub eta_mu: f64,
    pub eta_mrho: f64,
}

/// `chi(rho; s - u) = [rho^(2 theta) - (s - u)^2]_+^lambda`.
pub fn kernel_chi(eos: &GammaLawEos, rho: f64, s: f64, u: f64) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    let base = rho.powf(2.0 * eos.theta()) - (s - u) * (s - u);
    if base <= 0.0 {
        0.0
    } else {
        base.powf(eos.lambda())
    }
}

/// Mechanical energy pair `eta* = m^2/(2 rho) + e(rho)`, `q* = m^3/(2 rho^2) + m e'(rho)`.
pub fn mechanical_entropy(eos: &GammaLawEos, rho: f64, m: f64) -> Result<EntropyPair> {
    if !(rho >= 0.0 && rho.is_finite() && m.is_finite()) {
        return Err(Error::domain(format!("invalid state (rho={rho}, m={m})")));
    }
    if rho == 0.0 {
        if m != 0.0 {
            return Err(Error::domain(format!("nonzero momentum {m} at vacuum")));
        }
        return Ok(EntropyPair::default());
    }
    let e = eos.internal_energy_unchecked(rho);
    let de = eos.kappa() * eos.gamma() / (eos.gamma() - 1.0) * rho.powf(eos.gamma() - 1.0);
    Ok(EntropyPair {
        eta: 0.5 * m * m / rho + e,
        q: 0.5 * m * m * m / (rho * rho) + m * de,
    })
}

#[derive(Debug, Clone)]
struct RuleSet {
    /// weight (1-t)^lambda (1+t)^lambda
    both: GaussJacobi,
    /// weight (1-t)^lambda
    right: GaussJacobi,
    /// weight (1+t)^lambda
    left: GaussJacobi,
    plain: GaussJacobi,
}

impl RuleSet {
    fn new(n: usize, lambda: f64) -> Result<Self> {
        Ok(Self {
            both: GaussJacobi::new(n, lambda, lambda)?,
            right: GaussJacobi::new(n, lambda, 0.0)?,
            left: GaussJacobi::new(n, 0.0, lambda)?,
            plain: GaussJacobi::new(n, 0.0, 0.0)?,
        })
    }
}

/// Signed and absolute accumulators for a 2-component integrand.
#[derive(Debug, Clone, Copy, Default)]
struct Accum {
    value: [f64; 2],
    abs: [f64; 2],
}

/// Quadrature engine for weak entropy pairs at a fixed `gamma`. Immutable once built.
#[derive(Debug, Clone)]
pub struct EntropyKernel {
    eos: GammaLawEos,
    primary: RuleSet,
    check: RuleSet,
    mass: f64,
}

impl EntropyKernel {
    pub fn new(eos: GammaLawEos) -> Result<Self> {
        let lambda = eos.lambda();
        Ok(Self {
            eos,
            primary: RuleSet::new(PRIMARY_NODES, lambda)?,
            check: RuleSet::new(CHECK_NODES, lambda)?,
            mass: jacobi_weight_mass(lambda, lambda),
        })
    }

    pub fn eos(&self) -> &GammaLawEos {
        &self.eos
    }

    /// `M_lambda = ∫_{-1}^{1} (1 - t^2)^lambda dt`.
    pub fn moment_mass(&self) -> f64 {
        self.mass
    }

    /// `beta = ∫ |s| [1 - s^2]_+^lambda ds = 1 / (lambda + 1)`.
    pub fn beta_constant(&self) -> f64 {
        1.0 / (self.eos.lambda() + 1.0)
    }

    /// `∫_{-1}^{1} f(t) (1 - t^2)^lambda dt` for `f` smooth between the given breakpoints.
    pub fn weighted_integral(&self, f: impl Fn(f64) -> f64, breakpoints: &[f64]) -> Result<f64> {
        let g = |t: f64| [f(t), 0.0];
        let (v, _) = self.cross_checked(-1.0, 1.0, breakpoints, &g)?;
        Ok(v[0])
    }

    /// Entropy and flux generated by `gen` at `(rho, u)`.
    pub fn pair(&self, gen: &EntropyGenerator, rho: f64, u: f64) -> Result<EntropyPair> {
        if !(rho >= 0.0 && rho.is_finite() && u.is_finite()) {
            return Err(Error::domain(format!("invalid state (rho={rho}, u={u})")));
        }
        if rho == 0.0 {
            return Ok(EntropyPair::default());
        }
        let r = rho.powf(self.eos.theta());
        let theta = self.eos.theta();
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        if let Some((a, b)) = gen.support() {
            lo = lo.max((a - u) / r);
            hi = hi.min((b - u) / r);
            if lo >= hi {
                return Ok(EntropyPair::default());
            }
        }
        let mut cuts = [0.0f64; 2];
        let mut n_cuts = 0;
        for &s in gen.breakpoints() {
            let t = (s - u) / r;
            if t > lo && t < hi {
                cuts[n_cuts] = t;
                n_cuts += 1;
            }
        }
        let g = |t: f64| {
            let s = u + r * t;
            let psi = gen.value(s);
            [psi, (u + theta * r * t) * psi]
        };
        let (v, _) = self.cross_checked(lo, hi, &cuts[..n_cuts], &g)?;
        Ok(EntropyPair {
            eta: rho * v[0],
            q: rho * v[1],
        })
    }

    /// Same as [`pair`](Self::pair) with momentum as the second variable.
    pub fn pair_conserved(&self, gen: &EntropyGenerator, rho: f64, m: f64) -> Result<EntropyPair> {
        if rho == 0.0 && m != 0.0 {
            return Err(Error::domain(format!("nonzero momentum {m} at vacuum")));
        }
        let u = if rho > 0.0 { m / rho } else { 0.0 };
        self.pair(gen, rho, u)
    }

    /// Closed-form `(eta, q, eta_m)` for quadratic generators, `None` otherwise.
    ///
    /// Uses the normalized moments `∫ t^k (1 - t^2)^lambda dt / M_lambda`: 0 for odd `k` and
    /// `1 / (2 lambda + 3)` for `k = 2`. Bulk diagnostics use this instead of quadrature.
    pub fn polynomial_pair(&self, gen: &EntropyGenerator, rho: f64, u: f64) -> Option<(EntropyPair, f64)> {
        let EntropyGenerator::Polynomial { c0, c1, c2 } = *gen else {
            return None;
        };
        if rho <= 0.0 {
            return Some((EntropyPair::default(), 0.0));
        }
        let m2 = 1.0 / (2.0 * self.eos.lambda() + 3.0);
        let a2 = rho.powf(2.0 * self.eos.theta()) * m2;
        let base = c0 + c1 * u + c2 * u * u;
        let eta = self.mass * rho * (base + c2 * a2);
        let q = self.mass * rho * (u * base + c2 * u * a2 + self.eos.theta() * a2 * (c1 + 2.0 * c2 * u));
        Some((EntropyPair { eta, q }, self.mass * (c1 + 2.0 * c2 * u)))
    }

    /// Derivatives by central differences with one Richardson halving.
    ///
    /// First derivatives use the step `1e-5 max(1, |x|)`, second derivatives `1e-3 max(1, |x|)`
    /// (the smaller step would drown a second difference in quadrature roundoff).
    pub fn derivatives(&self, gen: &EntropyGenerator, rho: f64, u: f64) -> Result<EntropyDerivatives> {
        if !(rho > 0.0 && rho.is_finite() && u.is_finite()) {
            return Err(Error::domain(format!(
                "derivatives need positive density, got (rho={rho}, u={u})"
            )));
        }
        let m = rho * u;
        let eta = |r: f64, mm: f64| -> Result<f64> { Ok(self.pair(gen, r, mm / r)?.eta) };

        let h_m1 = 1e-5 * m.abs().max(1.0);
        let h_r1 = (1e-5 * rho.max(1.0)).min(0.25 * rho);
        let h_m2 = 1e-3 * m.abs().max(1.0);
        let h_r2 = (1e-3 * rho.max(1.0)).min(0.25 * rho);

        let eta_m = richardson("eta_m", h_m1, 1, |h| {
            Ok((eta(rho, m + h)? - eta(rho, m - h)?) / (2.0 * h))
        })?;
        let eta_rho = richardson("eta_rho", h_r1, 1, |h| {
            Ok((eta(rho + h, m)? - eta(rho - h, m)?) / (2.0 * h))
        })?;
        let e0 = eta(rho, m)?;
        let eta_mm = richardson("eta_mm", h_m2, 2, |h| {
            Ok((eta(rho, m + h)? - 2.0 * e0 + eta(rho, m - h)?) / (h * h))
        })?;
        // mixed derivative in (rho, m) with steps scaled together
        let ratio = h_r2 / h_m2;
        let eta_m_rho = richardson("eta_mrho", h_m2, 2, |h| {
            let hr = ratio * h;
            Ok((eta(rho + hr, m + h)? - eta(rho + hr, m - h)? - eta(rho - hr, m + h)?
                + eta(rho - hr, m - h)?)
                / (4.0 * hr * h))
        })?;
        Ok(EntropyDerivatives {
            eta_rho,
            eta_m,
            eta_mm,
            // chain rule for eta_m(rho, rho u)
            eta_mu: rho * eta_mm,
            eta_mrho: eta_m_rho + u * eta_mm,
        })
    }

    fn cross_checked(
        &self,
        lo: f64,
        hi: f64,
        cuts: &[f64],
        g: &impl Fn(f64) -> [f64; 2],
    ) -> Result<([f64; 2], [f64; 2])> {
        let a = self.integrate_pieces(&self.primary, lo, hi, cuts, g)?;
        let b = self.integrate_pieces(&self.check, lo, hi, cuts, g)?;
        for k in 0..2 {
            let scale = b.value[k].abs().max(b.abs[k]);
            let diff = (a.value[k] - b.value[k]).abs();
            if diff > CROSS_CHECK_TOL * scale {
                return Err(Error::numeric(
                    format!(
                        "{PRIMARY_NODES}/{CHECK_NODES}-node entropy quadratures disagree on [{lo}, {hi}]"
                    ),
                    diff / scale,
                ));
            }
        }
        Ok((b.value, b.abs))
    }

    fn integrate_pieces(
        &self,
        rules: &RuleSet,
        lo: f64,
        hi: f64,
        cuts: &[f64],
        g: &impl Fn(f64) -> [f64; 2],
    ) -> Result<Accum> {
        let mut acc = Accum::default();
        let mut start = lo;
        let mut sorted = [0.0f64; 4];
        let n = cuts.len().min(sorted.len());
        sorted[..n].copy_from_slice(&cuts[..n]);
        sorted[..n].sort_by(|a, b| a.total_cmp(b));
        for &c in sorted[..n].iter().chain(std::iter::once(&hi)) {
            if c > start {
                self.segment(rules, start, c, g, &mut acc, 0)?;
                start = c;
            }
        }
        Ok(acc)
    }

    /// Integrates over `[c, d] ⊂ [-1, 1]`, splitting off pieces whose length exceeds their
    /// distance to a non-absorbed endpoint singularity.
    fn segment(
        &self,
        rules: &RuleSet,
        c: f64,
        d: f64,
        g: &impl Fn(f64) -> [f64; 2],
        acc: &mut Accum,
        depth: usize,
    ) -> Result<()> {
        let lambda = self.eos.lambda();
        let len = d - c;
        if len <= 0.0 {
            return Ok(());
        }
        if depth > 400 {
            return Err(Error::numeric("graded quadrature did not terminate", len));
        }
        let left_sing = c <= -1.0;
        let right_sing = d >= 1.0;
        let smooth_factor = lambda == 0.0;
        let left_dist = c + 1.0;
        let right_dist = 1.0 - d;
        if !smooth_factor && !left_sing && left_dist < len {
            let m = c + left_dist;
            self.segment(rules, c, m, g, acc, depth + 1)?;
            return self.segment(rules, m, d, g, acc, depth + 1);
        }
        if !smooth_factor && !right_sing && right_dist < len {
            let m = d - right_dist;
            self.segment(rules, c, m, g, acc, depth + 1)?;
            return self.segment(rules, m, d, g, acc, depth + 1);
        }
        let half = 0.5 * len;
        let (rule, scale) = match (left_sing && !smooth_factor, right_sing && !smooth_factor) {
            (true, true) => (&rules.both, half.powf(2.0 * lambda)),
            (true, false) => (&rules.left, half.powf(lambda)),
            (false, true) => (&rules.right, half.powf(lambda)),
            (false, false) => (&rules.plain, 1.0),
        };
        let absorbed_left = left_sing && !smooth_factor;
        let absorbed_right = right_sing && !smooth_factor;
        for (&y, &w) in rule.nodes().iter().zip(rule.weights()) {
            let t = c + half * (y + 1.0);
            let mut factor = 1.0;
            if !smooth_factor {
                if !absorbed_left {
                    factor *= (1.0 + t).powf(lambda);
                }
                if !absorbed_right {
                    factor *= (1.0 - t).powf(lambda);
                }
            }
            let v = g(t);
            let k = w * scale * half * factor;
            for i in 0..2 {
                acc.value[i] += k * v[i];
                acc.abs[i] += (k * v[i]).abs();
            }
        }
        Ok(())
    }
}

fn richardson(
    what: &str,
    h: f64,
    order: u32,
    mut diff: impl FnMut(f64) -> Result<f64>,
) -> Result<f64> {
    if !(h > f64::MIN_POSITIVE * 1e10) {
        return Err(Error::numeric(format!("{what}: finite-difference step underflow"), h));
    }
    let coarse = diff(h)?;
    let fine = diff(0.5 * h)?;
    let gap = (fine - coarse).abs();
    // central differences are second order in h; tolerance reflects step and roundoff
    let tol = if order == 1 { 1e-4 } else { 1e-3 };
    if !(gap <= tol * fine.abs().max(1.0)) {
        return Err(Error::numeric(
            format!("{what}: inconsistent Richardson extrapolation"),
            gap,
        ));
    }
    Ok((4.0 * fine - coarse) / 3.0)
}
