use serde::Serialize;

use super::PulseParams;
use crate::error::{Error, Result};
use crate::numeric::bisect;

/// Points in the ξ scan for sign changes of the phase condition.
const SCAN_POINTS: usize = 10_000;

/// Root (ε, ξ, Δ) of the equal-modulus constraints for a rectangular
/// two-tone pulse: ε² = ξ²(1 − 2/(3sin²ξ)) and
/// cos ε·cos ξ + (ε/ξ)·sin ε·sin ξ = 0, with 2Δ² = ξ² − ε².
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseSolution {
    /// ε = δω·τ_p, radians.
    pub epsilon: f64,
    pub xi: f64,
    /// Common transition amplitude Δ₁ = Δ₂ (times τ_p), radians.
    pub delta: f64,
}

/// Residuals of the two constraints and the amplitude relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    pub modulus: f64,
    pub phase: f64,
    pub amplitude: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.modulus.abs().max(self.phase.abs()).max(self.amplitude.abs())
    }
}

impl PulseSolution {
    pub fn residuals(&self) -> Residuals {
        let (e, x, d) = (self.epsilon, self.xi, self.delta);
        let s = x.sin();
        Residuals {
            modulus: e * e - x * x * (1.0 - 2.0 / (3.0 * s * s)),
            phase: phase_condition(e, x),
            amplitude: 2.0 * d * d - (x * x - e * e),
        }
    }

    /// ε = −ε₀, Δ₁ = Δ₂ = +Δ₀.
    pub fn readout(&self) -> PulseParams {
        PulseParams::new(-self.epsilon, self.delta, self.delta)
    }

    /// ε = +ε₀, Δ₁ = Δ₂ = −Δ₀.
    pub fn preparation(&self) -> PulseParams {
        PulseParams::new(self.epsilon, -self.delta, -self.delta)
    }

    /// Pulse length τ_p = ε/|δω| for detuning δω in rad/s.
    pub fn duration(&self, detuning: f64) -> f64 {
        self.epsilon / detuning.abs()
    }
}

fn epsilon_of(xi: f64) -> f64 {
    let s = xi.sin();
    xi * (1.0 - 2.0 / (3.0 * s * s)).max(0.0).sqrt()
}

fn phase_condition(epsilon: f64, xi: f64) -> f64 {
    epsilon.cos() * xi.cos() + epsilon / xi * epsilon.sin() * xi.sin()
}

/// Window of ξ where sin²ξ ≥ 2/3.
pub fn xi_window() -> (f64, f64) {
    let lo = (2.0f64 / 3.0).sqrt().asin();
    (lo, std::f64::consts::PI - lo)
}

/// Every root found in the window, by increasing ξ.
pub fn transcendental_roots() -> Vec<PulseSolution> {
    let (lo, hi) = xi_window();
    let g = |xi: f64| phase_condition(epsilon_of(xi), xi);
    let h = (hi - lo) / SCAN_POINTS as f64;
    let mut roots = Vec::new();
    let mut prev_x = lo + h;
    let mut prev_g = g(prev_x);
    for i in 2..SCAN_POINTS {
        let x = lo + h * i as f64;
        let gx = g(x);
        if prev_g.signum() != gx.signum() {
            if let Some(xi) = bisect(g, prev_x, x, 1e-15) {
                let epsilon = epsilon_of(xi);
                let delta = (0.5 * (xi * xi - epsilon * epsilon)).sqrt();
                roots.push(PulseSolution { epsilon, xi, delta });
            }
        }
        prev_x = x;
        prev_g = gx;
    }
    roots
}

/// The root with the smallest ε, i.e. the shortest pulse for a given detuning.
pub fn solve_transcendental() -> Result<PulseSolution> {
    transcendental_roots()
        .into_iter()
        .min_by(|a, b| a.epsilon.total_cmp(&b.epsilon))
        .ok_or_else(|| Error::SolverFailure("no sign change of the phase condition in the ξ window".into()))
}
