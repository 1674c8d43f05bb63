//! Gamma-law pressure and the energies built on it.
//!
//! The pressure constant is normalized to `kappa = (gamma - 1)^2 / (4 gamma)`, which makes the
//! sound speed `theta * rho^theta` and the Riemann invariants `u +- rho^theta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pressure law `p = kappa * rho^gamma` with its derived exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaLawEos {
    gamma: f64,
    kappa: f64,
    theta: f64,
    lambda: f64,
}

impl GammaLawEos {
    /// Canonical normalization `kappa = (gamma-1)^2/(4 gamma)`.
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::config("gamma", format!("gamma must satisfy gamma > 1, got {gamma}")));
        }
        let kappa = (gamma - 1.0).powi(2) / (4.0 * gamma);
        Ok(Self::assemble(gamma, kappa))
    }

    /// Override the pressure constant. The kernel exponents stay tied to `gamma`; only the
    /// mechanical quantities (pressure, sound speed, energies) see the new `kappa`.
    pub fn with_kappa(gamma: f64, kappa: f64) -> Result<Self> {
        let mut eos = Self::new(gamma)?;
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::config("kappa", format!("kappa must be positive, got {kappa}")));
        }
        eos.kappa = kappa;
        Ok(eos)
    }

    fn assemble(gamma: f64, kappa: f64) -> Self {
        Self {
            gamma,
            kappa,
            theta: 0.5 * (gamma - 1.0),
            lambda: (3.0 - gamma) / (2.0 * (gamma - 1.0)),
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// True when `kappa` has the canonical value, so that `c = theta rho^theta`.
    pub fn is_canonical(&self) -> bool {
        let canonical = (self.gamma - 1.0).powi(2) / (4.0 * self.gamma);
        (self.kappa - canonical).abs() <= 1e-15 * canonical
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.pressure_unchecked(rho))
    }

    pub fn sound_speed(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.sound_speed_unchecked(rho))
    }

    /// `e(rho) = kappa rho^gamma / (gamma - 1)`.
    pub fn internal_energy(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.internal_energy_unchecked(rho))
    }

    /// `e'(rho) = kappa gamma rho^(gamma-1) / (gamma - 1)`.
    pub fn internal_energy_slope(&self, rho: f64) -> Result<f64> {
        check_density(rho)?;
        Ok(self.kappa * self.gamma / (self.gamma - 1.0) * rho.powf(self.gamma - 1.0))
    }

    /// Taylor remainder `e(rho) - e(rho_bar) - e'(rho_bar)(rho - rho_bar)`, always nonnegative.
    pub fn relative_energy(&self, rho: f64, rho_bar: f64) -> Result<f64> {
        check_density(rho)?;
        if !(rho_bar > 0.0 && rho_bar.is_finite()) {
            return Err(Error::domain(format!(
                "reference density must be positive, got {rho_bar}"
            )));
        }
        Ok(self.relative_energy_unchecked(rho, rho_bar))
    }

    #[inline]
    pub(crate) fn pressure_unchecked(&self, rho: f64) -> f64 {
        self.kappa * rho.powf(self.gamma)
    }

    #[inline]
    pub(crate) fn sound_speed_unchecked(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        (self.kappa * self.gamma).sqrt() * rho.powf(self.theta)
    }

    #[inline]
    pub(crate) fn internal_energy_unchecked(&self, rho: f64) -> f64 {
        self.kappa / (self.gamma - 1.0) * rho.powf(self.gamma)
    }

    #[inline]
    pub(crate) fn relative_energy_unchecked(&self, rho: f64, rho_bar: f64) -> f64 {
        let g = self.gamma;
        let c = self.kappa / (g - 1.0);
        let e_bar = c * rho_bar.powf(g);
        let slope = c * g * rho_bar.powf(g - 1.0);
        let value = c * rho.powf(g) - e_bar - slope * (rho - rho_bar);
        // convexity makes the exact value nonnegative; clip cancellation noise
        value.max(0.0)
    }
}

fn check_density(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("density must be nonnegative and finite, got {rho}")))
    }
}

/// Density and velocity at a point. Momentum is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointState {
    pub rho: f64,
    pub u: f64,
}

impl PointState {
    pub fn new(rho: f64, u: f64) -> Self {
        Self { rho, u }
    }

    pub fn vacuum() -> Self {
        Self { rho: 0.0, u: 0.0 }
    }

    /// Builds the state from conserved variables; velocity is zero at vacuum.
    pub fn from_conserved(rho: f64, m: f64) -> Self {
        if rho > 0.0 {
            Self { rho, u: m / rho }
        } else {
            Self { rho: 0.0, u: 0.0 }
        }
    }

    #[inline]
    pub fn m(&self) -> f64 {
        if self.rho > 0.0 {
            self.rho * self.u
        } else {
            0.0
        }
    }
}
