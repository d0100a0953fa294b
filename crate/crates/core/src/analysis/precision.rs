use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::constants;
use crate::error::{Error, Result};

/// Phase-accumulation time spent over a K-step schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceBudget {
    /// Net coherence time T, seconds.
    pub total_time: f64,
    pub steps: u32,
    /// τ₀, seconds.
    pub min_delay: f64,
}

impl ResourceBudget {
    pub fn new(base: u32, steps: u32, min_delay: f64) -> Result<Self> {
        Ok(Self { total_time: coherence_time(base, steps, min_delay)?, steps, min_delay })
    }
}

/// T = τ₀·Σ_{k<K} d^k = τ₀(d^K − 1)/(d − 1).
pub fn coherence_time(base: u32, steps: u32, min_delay: f64) -> Result<f64> {
    if base < 2 {
        return Err(Error::InvalidDimension(base as usize));
    }
    let sum = (0..steps)
        .try_fold(0u128, |acc, k| (base as u128).checked_pow(k).and_then(|p| acc.checked_add(p)))
        .ok_or_else(|| Error::InvalidParameter(format!("{base}^{steps} overflows")))?;
    Ok(min_delay * sum as f64)
}

/// δH = 2πħ/[μ(d − 1)T].
pub fn heisenberg_precision(base: u32, total_time: f64, moment: f64) -> f64 {
    let prefactor = 2.0 * PI * constants::active().hbar / moment;
    prefactor / ((base as f64 - 1.0) * total_time)
}

/// δH ≈ 2πħ/(μ·d·T₂) once the longest Ramsey delay reaches T₂.
pub fn t2_limited_precision(moment: f64, base: u32, t2: f64) -> f64 {
    2.0 * PI * constants::active().hbar / (moment * base as f64 * t2)
}

/// δH ≈ 2πħ/(μ·d·√(T₂·t)) when the T₂-long measurement is repeated for a
/// total time t ≥ T₂.
pub fn long_time_precision(moment: f64, base: u32, t2: f64, duration: f64) -> f64 {
    2.0 * PI * constants::active().hbar / (moment * base as f64 * (t2 * duration).sqrt())
}

/// δH ≈ 2πħ/(μ·d·T₂·√(t/T_rep)) when each repetition costs T_rep ≥ T₂.
pub fn repetition_limited_precision(moment: f64, base: u32, t2: f64, repetition: f64, duration: f64) -> f64 {
    2.0 * PI * constants::active().hbar / (moment * base as f64 * t2 * (duration / repetition).sqrt())
}

/// Smallest K with d^{-K} ≤ r, i.e. ⌈−log_d r⌉.
pub fn steps_required(base: u32, relative_precision: f64) -> Result<u32> {
    if base < 2 {
        return Err(Error::InvalidDimension(base as usize));
    }
    if !(relative_precision > 0.0 && relative_precision < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "relative precision must lie in (0, 1), got {relative_precision}"
        )));
    }
    let mut k = fractional_steps(base, relative_precision).floor().max(0.0) as u32;
    // Correct for log roundoff so exact powers d^{-K} give K.
    while (base as f64).powi(k as i32) * relative_precision < 1.0 - 1e-12 {
        k += 1;
    }
    while k > 0 && (base as f64).powi(k as i32 - 1) * relative_precision >= 1.0 - 1e-12 {
        k -= 1;
    }
    Ok(k)
}

/// −log_d r without rounding up.
pub fn fractional_steps(base: u32, relative_precision: f64) -> f64 {
    -relative_precision.ln() / (base as f64).ln()
}

/// Asymptotic K_{d₂}/K_{d₁} = ln d₁ / ln d₂.
pub fn step_ratio(from_base: u32, to_base: u32) -> f64 {
    (from_base as f64).ln() / (to_base as f64).ln()
}

/// ln 2 / ln 3, the qubit → qutrit step saving.
pub fn qutrit_step_ratio() -> f64 {
    LN_2 / 3f64.ln()
}

/// Longest usable schedule when the top delay must fit in T₂:
/// K = 1 + ⌊log_d(T₂/τ₀)⌋.
pub fn max_steps(base: u32, t2: f64, min_delay: f64) -> Result<u32> {
    if base < 2 {
        return Err(Error::InvalidDimension(base as usize));
    }
    if !(t2 >= min_delay && min_delay > 0.0) {
        return Err(Error::InvalidParameter("need T2 ≥ τ0 > 0".into()));
    }
    let ratio = t2 / min_delay;
    let mut k = (ratio.ln() / (base as f64).ln()).floor() as i32;
    while (base as f64).powi(k + 1) <= ratio * (1.0 + 1e-12) {
        k += 1;
    }
    while k > 0 && (base as f64).powi(k) > ratio * (1.0 + 1e-12) {
        k -= 1;
    }
    Ok(1 + k as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coherence_sums() {
        assert_eq!(coherence_time(2, 3, 1.0).unwrap(), 7.0);
        assert_eq!(coherence_time(3, 3, 1.0).unwrap(), 13.0);
        for k in 8..15 {
            let t = coherence_time(3, k, 1.0).unwrap();
            assert!((t / (3f64.powi(k as i32) / 2.0) - 1.0).abs() < 0.01);
        }
        let b = ResourceBudget::new(3, 4, 2.0).unwrap();
        assert_eq!(b.total_time, 80.0);
    }

    #[test]
    fn heisenberg_prefactors() {
        let mu = 1e5 * constants::CODATA.bohr_magneton;
        let t = 3.7e-6;
        let qubit = heisenberg_precision(2, t, mu);
        assert_relative_eq!(qubit, 2.0 * PI * constants::CODATA.hbar / (mu * t), max_relative = 1e-15);
        assert_eq!(heisenberg_precision(3, t, mu), qubit / 2.0);
        assert_relative_eq!(heisenberg_precision(3, 10.0 * t, mu) * 10.0 * t, heisenberg_precision(3, t, mu) * t, max_relative = 1e-14);
    }

    #[test]
    fn long_time_forms_are_continuous() {
        let mu = 1e5 * constants::CODATA.bohr_magneton;
        let t2 = 1e-6;
        assert_relative_eq!(long_time_precision(mu, 3, t2, t2), t2_limited_precision(mu, 3, t2), max_relative = 1e-15);
        assert_relative_eq!(
            repetition_limited_precision(mu, 3, t2, t2, 1.0),
            long_time_precision(mu, 3, t2, 1.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn step_counts() {
        assert_eq!(steps_required(3, 3f64.powi(-5)).unwrap(), 5);
        assert_eq!(steps_required(3, 1e-3).unwrap(), 7);
        assert_eq!(steps_required(2, 1e-3).unwrap(), 10);
        assert_eq!(steps_required(2, 0.5).unwrap(), 1);
        assert!(steps_required(2, 1.0).is_err());
        assert_relative_eq!(step_ratio(2, 3), 0.6309297535714574, max_relative = 1e-15);
        assert_eq!(max_steps(3, 27e-9, 1e-9).unwrap(), 4);
        assert_eq!(max_steps(3, 26e-9, 1e-9).unwrap(), 3);
        assert_eq!(max_steps(2, 1e-9, 1e-9).unwrap(), 1);
    }
}
