//! Numerical laboratory for the vanishing-viscosity limit of the one-dimensional isentropic
//! compressible Navier–Stokes equations with density-dependent viscosity
//!
//! ```text
//! rho_t + (rho u)_x = 0
//! (rho u)_t + (rho u^2 + p(rho))_x = eps (rho^alpha u_x)_x
//! ```
//!
//! and its inviscid limit, the isentropic Euler equations.

pub mod checks;
pub mod diagnostics;
pub mod entropy;
pub mod eos;
pub mod error;
pub mod field;
pub mod godunov;
pub mod quadrature;
pub mod riemann;
pub mod sweep;
pub mod viscous;

pub use entropy::{EntropyGenerator, EntropyKernel, EntropyPair};
pub use eos::{GammaLawEos, PointState};
pub use error::{Error, Result};
pub use field::{FarField, Grid, SolutionField};
pub use riemann::{sample, solve_riemann, RiemannData, WaveStructure};
pub use viscous::{ViscousParams, ViscousSolver};
