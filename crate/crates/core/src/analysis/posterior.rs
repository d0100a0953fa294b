use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{integrate, integrate_panels};
use crate::qudit::DigitString;

/// Below this |φ − φ̃| the density is evaluated from its Taylor series.
const SERIES_THRESHOLD: f64 = 1e-6;

/// Posterior over the sensed phase after observing a K-digit string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSpec {
    pub base: u32,
    pub steps: u32,
    /// φ̃ ∈ [0, 2π).
    pub reference_phase: f64,
}

impl PosteriorSpec {
    pub fn new(base: u32, steps: u32, reference_phase: f64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidDimension(base as usize));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("posterior needs at least one step".into()));
        }
        if !reference_phase.is_finite() {
            return Err(Error::InvalidParameter("reference phase must be finite".into()));
        }
        Ok(Self { base, steps, reference_phase: reference_phase.rem_euclid(2.0 * PI) })
    }

    pub fn from_digits(digits: &DigitString) -> Result<Self> {
        Self::new(digits.base(), digits.len() as u32, digits.reference_phase())
    }

    /// d^K as a float.
    pub fn resolution_count(&self) -> f64 {
        (self.base as f64).powi(self.steps as i32)
    }

    /// Half-width 2π/d^K of the central peak.
    pub fn peak_half_width(&self) -> f64 {
        2.0 * PI / self.resolution_count()
    }

    /// Peak value d^K/2π.
    pub fn peak_density(&self) -> f64 {
        self.resolution_count() / (2.0 * PI)
    }
}

/// Wraps to (−π, π].
fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y == -PI {
        PI
    } else {
        y
    }
}

/// (1/2π)·sin²[N(φ−φ̃)/2] / (N·sin²[(φ−φ̃)/2]) with N = d^K.
pub fn posterior_density(phi: f64, spec: &PosteriorSpec) -> f64 {
    density_at_offset(phi - spec.reference_phase, spec.resolution_count())
}

fn density_at_offset(offset: f64, n: f64) -> f64 {
    let x = wrap(offset);
    let u = 0.5 * x;
    if x.abs() < SERIES_THRESHOLD && n * x.abs() < 1e-2 {
        // sin²(Nu)/(N sin²u) = N[1 − (N² − 1)u²/3 + O(N⁴u⁴)]
        return n * (1.0 - (n * n - 1.0) * u * u / 3.0) / (2.0 * PI);
    }
    let num = (n * u).sin();
    let den = u.sin();
    num * num / (n * den * den) / (2.0 * PI)
}

/// Likelihood product over the K steps,
/// Π_k (1/d²)|Σ_m e^{im·d^k(φ−φ̃)}|², scaled to a density over [0, 2π).
///
/// The product equals |Σ_{n<d^K} e^{inx}|²/d^{2K}, whose integral over one
/// period is 2π/d^K by Parseval, so the normalizing factor is d^K/2π.
pub fn posterior_product(phi: f64, digits: &DigitString) -> f64 {
    let d = digits.base() as usize;
    let x = phi - digits.reference_phase();
    let mut scale = x.rem_euclid(2.0 * PI);
    let mut product = 1.0;
    for _ in 0..digits.len() {
        let sum: Complex64 = (0..d).map(|m| Complex64::from_polar(1.0, m as f64 * scale)).sum();
        product *= sum.norm_sqr() / (d * d) as f64;
        scale = (scale * d as f64).rem_euclid(2.0 * PI);
    }
    let n = (d as f64).powi(digits.len() as i32);
    product * n / (2.0 * PI)
}

/// Numerical ∫ over one period of the posterior (should be 1).
pub fn posterior_normalization(spec: &PosteriorSpec) -> f64 {
    let lo = spec.reference_phase - PI;
    let panels = (4.0 * spec.resolution_count()).min(65536.0) as usize;
    integrate_panels(&|phi| posterior_density(phi, spec), lo, lo + 2.0 * PI, panels, 1e-10)
}

/// Posterior mass inside the central peak δφ ∈ [−2π/d^K, 2π/d^K].
pub fn central_peak_probability(base: u32, steps: u32) -> Result<f64> {
    let spec = PosteriorSpec::new(base, steps, 0.0)?;
    let w = spec.peak_half_width().min(PI);
    let n = spec.resolution_count();
    let f = |x: f64| density_at_offset(x, n);
    // Integrand is even; split at the peak so both halves are smooth.
    Ok(2.0 * integrate(&f, 0.0, w, 1e-12))
}

/// (δφ, density) samples for plotting.
pub fn density_profile(spec: &PosteriorSpec, offsets: impl IntoIterator<Item = f64>) -> Vec<(f64, f64)> {
    offsets
        .into_iter()
        .map(|dphi| (dphi, posterior_density(spec.reference_phase + dphi, spec)))
        .collect()
}

/// `points` evenly spaced offsets covering [−span, span].
pub fn symmetric_grid(span: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let m = (points - 1) as f64;
            // Exactly symmetric, with 0 on the grid for odd point counts.
            (0..points).map(|i| span * (2.0 * i as f64 - m) / m).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn peak_value_is_the_limit() {
        let spec = PosteriorSpec::new(3, 2, 1.0).unwrap();
        assert_abs_diff_eq!(posterior_density(1.0, &spec), 9.0 / (2.0 * PI), epsilon = 1e-15);
        // Continuity across the series threshold.
        for dx in [0.9e-6, 1.1e-6, 1e-5] {
            let series = density_at_offset(dx, 9.0);
            let u = dx / 2.0;
            let direct = (9.0 * u).sin().powi(2) / (9.0 * u.sin().powi(2)) / (2.0 * PI);
            assert_abs_diff_eq!(series, direct, epsilon = 1e-9);
        }
    }

    #[test]
    fn orthogonal_counting_state_has_zero_weight() {
        let digits = DigitString::new(3, vec![0]).unwrap();
        assert_abs_diff_eq!(posterior_product(2.0 * PI / 3.0, &digits), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(posterior_product(0.0, &digits), 3.0 / (2.0 * PI), epsilon = 1e-15);
    }

    #[test]
    fn normalizes_to_one() {
        for d in [2u32, 3] {
            for k in 1..=5u32 {
                let spec = PosteriorSpec::new(d, k, 0.37).unwrap();
                assert_abs_diff_eq!(posterior_normalization(&spec), 1.0, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn small_k_peak_mass() {
        // Whole circle for a single qubit step.
        assert_abs_diff_eq!(central_peak_probability(2, 1).unwrap(), 1.0, epsilon = 1e-10);
        let k1 = central_peak_probability(3, 1).unwrap();
        let k6 = central_peak_probability(3, 6).unwrap();
        assert!(k1 >= k6);
    }

    #[test]
    fn profile_peak_and_widths() {
        let spec = PosteriorSpec::new(3, 3, 0.0).unwrap();
        let prof = density_profile(&spec, symmetric_grid(PI, 2001));
        let (x0, peak) = prof[1000];
        assert_eq!(x0, 0.0);
        assert_abs_diff_eq!(peak, 27.0 / (2.0 * PI), epsilon = 1e-12);
        // first zero at 2π/27
        assert_abs_diff_eq!(posterior_density(2.0 * PI / 27.0, &spec), 0.0, epsilon = 1e-12);
        let qubit = PosteriorSpec::new(2, 3, 0.0).unwrap();
        assert_abs_diff_eq!(qubit.peak_half_width() / spec.peak_half_width(), 27.0 / 8.0, epsilon = 1e-12);
    }
}
