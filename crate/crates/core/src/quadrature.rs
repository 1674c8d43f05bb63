//! Gauss–Jacobi quadrature for weights `(1 - x)^alpha (1 + x)^beta` on `[-1, 1]`.
//!
//! Nodes come from the Golub–Welsch eigenproblem of the Jacobi matrix and are then polished by
//! Newton iteration on the Jacobi polynomial; weights are `1 / ((1 - x^2) P_n'(x)^2)` scaled to the
//! exact weight mass. Both exponents must exceed -1.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaussJacobi {
    alpha: f64,
    beta: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussJacobi {
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("n", "quadrature needs at least one node"));
        }
        if !(alpha > -1.0 && beta > -1.0) {
            return Err(Error::domain(format!(
                "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
            )));
        }
        let mut nodes = golub_welsch_nodes(n, alpha, beta);
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            let mut z = *x;
            for _ in 0..8 {
                let (p, dp) = jacobi_and_derivative(n, alpha, beta, z);
                let dz = p / dp;
                z -= dz;
                if dz.abs() <= 1e-16 * (1.0 + z.abs()) {
                    break;
                }
            }
            let (_, dp) = jacobi_and_derivative(n, alpha, beta, z);
            *x = z;
            weights.push(1.0 / ((1.0 - z * z) * dp * dp));
        }
        // weights are proportional to 1 / ((1 - x^2) P_n'(x)^2); fix the constant by the mass
        let total: f64 = weights.iter().sum();
        let scale = jacobi_weight_mass(alpha, beta) / total;
        weights.iter_mut().for_each(|w| *w *= scale);
        Ok(Self {
            alpha,
            beta,
            nodes,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_j w_j f(x_j)`, i.e. the integral of `f` against the Jacobi weight on `[-1, 1]`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Total mass of the Jacobi weight: `2^(a+b+1) Γ(a+1) Γ(b+1) / Γ(a+b+2)`.
pub fn jacobi_weight_mass(alpha: f64, beta: f64) -> f64 {
    2f64.powf(alpha + beta + 1.0) * gamma(alpha + 1.0) * gamma(beta + 1.0)
        / gamma(alpha + beta + 2.0)
}

fn golub_welsch_nodes(n: usize, alpha: f64, beta: f64) -> Vec<f64> {
    let ab = alpha + beta;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let diag = if k == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            let t = 2.0 * kf + ab;
            (beta * beta - alpha * alpha) / (t * (t + 2.0))
        };
        jac[(k, k)] = diag;
        if k + 1 < n {
            let j = kf + 1.0;
            let t = 2.0 * j + ab;
            let b2 = if k == 0 {
                // (j + ab) / (t - 1) cancels at j = 1
                4.0 * (1.0 + alpha) * (1.0 + beta) / (t * t * (t + 1.0))
            } else {
                4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (t * t * (t + 1.0) * (t - 1.0))
            };
            let off = b2.sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    nodes
}

/// Value and derivative of `P_n^(alpha, beta)(z)` by the three-term recurrence.
fn jacobi_and_derivative(n: usize, alpha: f64, beta: f64, z: f64) -> (f64, f64) {
    let ab = alpha + beta;
    let mut p_prev = 1.0;
    let mut p = 0.5 * (alpha - beta + (ab + 2.0) * z);
    if n == 1 {
        let dp = 0.5 * (ab + 2.0);
        return (p, dp);
    }
    for j in 2..=n {
        let jf = j as f64;
        let t = 2.0 * jf + ab;
        let a = 2.0 * jf * (jf + ab) * (t - 2.0);
        let b = (t - 1.0) * (alpha * alpha - beta * beta + t * (t - 2.0) * z);
        let c = 2.0 * (jf - 1.0 + alpha) * (jf - 1.0 + beta) * t;
        let next = (b * p - c * p_prev) / a;
        p_prev = p;
        p = next;
    }
    let nf = n as f64;
    let t = 2.0 * nf + ab;
    let dp = (nf * (alpha - beta - t * z) * p + 2.0 * (nf + alpha) * (nf + beta) * p_prev)
        / (t * (1.0 - z * z));
    (p, dp)
}
