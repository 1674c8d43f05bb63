//! Self-checks of the entropy kernel against closed forms, run by `cnslab check-entropy`.

use statrs::function::beta::beta;

use crate::entropy::{mechanical_entropy, EntropyGenerator, EntropyKernel};
use crate::eos::GammaLawEos;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst observed error.
    pub worst: f64,
    pub tolerance: f64,
}

/// Fixed sample of `(rho, u)` states.
pub const SAMPLE_STATES: [(f64, f64); 12] = [
    (0.05, 0.0),
    (0.05, -1.7),
    (0.1, 0.4),
    (0.25, -0.3),
    (0.5, 1.1),
    (0.8, -2.2),
    (1.0, 0.0),
    (1.3, 0.75),
    (2.0, -0.5),
    (2.7, 3.0),
    (3.5, -1.0),
    (4.0, 0.2),
];

fn outcome(name: String, worst: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= tolerance,
        worst,
        tolerance,
    }
}

/// Runs every check at one `gamma`.
pub fn entropy_checks(gamma: f64) -> Result<Vec<CheckOutcome>> {
    let eos = GammaLawEos::new(gamma)?;
    let k = EntropyKernel::new(eos)?;
    let lambda = eos.lambda();
    // ∫ (1 - t^2)^lambda dt = B(1/2, lambda + 1)
    let mass = beta(0.5, lambda + 1.0);
    let mut out = Vec::new();

    out.push(outcome(
        format!("gamma={gamma}: kernel mass equals B(1/2, lambda+1)"),
        (k.moment_mass() - mass).abs() / mass,
        1e-12,
    ));

    let mut w0: f64 = 0.0;
    let mut w1: f64 = 0.0;
    let mut wm: f64 = 0.0;
    for &(rho, u) in &SAMPLE_STATES {
        let p0 = k.pair(&EntropyGenerator::one(), rho, u)?;
        w0 = w0.max((p0.eta - mass * rho).abs() / (mass * rho).max(1.0));
        let p1 = k.pair(&EntropyGenerator::s(), rho, u)?;
        w1 = w1.max((p1.eta - mass * rho * u).abs() / ((1.0 + u.abs()) * rho));
        let ph = k.pair(&EntropyGenerator::half_s_squared(), rho, u)?;
        let mech = mechanical_entropy(&eos, rho, rho * u)?;
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300);
        wm = wm.max(rel(ph.eta / mass, mech.eta)).max(if mech.q == 0.0 {
            (ph.q / mass).abs()
        } else {
            rel(ph.q / mass, mech.q)
        });
    }
    out.push(outcome(format!("gamma={gamma}: zeroth moment is M rho"), w0, 1e-8));
    out.push(outcome(format!("gamma={gamma}: first moment is M rho u"), w1, 1e-8));
    out.push(outcome(format!("gamma={gamma}: s^2/2 pair is M times the mechanical pair"), wm, 1e-8));

    let b = k.weighted_integral(|t| t.abs(), &[0.0])?;
    out.push(outcome(
        format!("gamma={gamma}: ∫|s|[1-s^2]_+^lambda ds = 1/(lambda+1)"),
        (b - k.beta_constant()).abs(),
        1e-10,
    ));

    let mut wd: f64 = 0.0;
    for &(rho, u) in SAMPLE_STATES.iter().filter(|s| s.0 >= 0.1) {
        let d = k.derivatives(&EntropyGenerator::half_s_squared(), rho, u)?;
        wd = wd.max((d.eta_m / mass - u).abs() / (1.0 + u.abs()));
    }
    out.push(outcome(format!("gamma={gamma}: eta_m of the s^2/2 pair is M u"), wd, 1e-7));
    Ok(out)
}
