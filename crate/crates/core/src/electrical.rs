//! Energies, effective resistance and the resistance-increase estimate.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::laplacian::{assemble, solve_approx, solve_exact, ResistanceVector};

/// `Σ_e r_e f(e)²` over the edges carried by `r`. Flow on edges absent from
/// `r` is ignored.
pub fn energy(r: &ResistanceVector, f: &[f64]) -> Result<f64> {
    if let Some(&e) = r.edges().iter().find(|&&e| e >= f.len()) {
        return Err(Error::DimensionMismatch {
            expected: e + 1,
            got: f.len(),
        });
    }
    Ok(r.edges()
        .iter()
        .zip(r.values())
        .map(|(&e, &re)| re * f[e] * f[e])
        .sum())
}

/// Effective s-t resistance and conductance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElectricalSummary {
    pub reff: f64,
    pub ceff: f64,
}

impl ElectricalSummary {
    pub fn from_reff(reff: f64) -> Self {
        Self {
            reff,
            ceff: 1.0 / reff,
        }
    }

    /// Energy of the electrical flow of value `value`.
    pub fn energy_at_value(&self, value: f64) -> f64 {
        value * value * self.reff
    }
}

/// Exact effective resistance: the energy of the unit electrical flow.
pub fn effective_resistance(g: &Graph, r: &ResistanceVector) -> Result<f64> {
    let sys = assemble(g, r)?;
    Ok(solve_exact(&sys, 1.0)?.energy)
}

/// Effective resistance together with a relative uncertainty, from a
/// certified approximate solve: the true value lies in
/// `[lower, lower · (1 + gap)]`.
pub fn effective_resistance_approx(
    g: &Graph,
    r: &ResistanceVector,
    delta: f64,
) -> Result<(f64, f64)> {
    let sys = assemble(g, r)?;
    let sol = solve_approx(&sys, 1.0, delta)?;
    Ok((sol.lower_bound, sol.delta_achieved))
}

pub fn summary(g: &Graph, r: &ResistanceVector) -> Result<ElectricalSummary> {
    effective_resistance(g, r).map(ElectricalSummary::from_reff)
}

/// Lower bound on the effective resistance after multiplying the resistance
/// of one edge by `gamma`, where that edge carried a `beta` fraction of the
/// electrical energy: `γ / (β + γ(1 - β)) · reff`.
pub fn predict_scaled_reff_lb(reff: f64, beta: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!("beta must lie in [0, 1], got {beta}")));
    }
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
    }
    if gamma.is_infinite() {
        return Ok(if beta == 1.0 {
            f64::INFINITY
        } else {
            reff / (1.0 - beta)
        });
    }
    Ok(gamma / (beta + gamma * (1.0 - beta)) * reff)
}
