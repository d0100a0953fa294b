//! Dimension-generic state and gate algebra for a single qudit.
//!
//! Everything here is immutable once built. The only operation with side
//! effects is [`QuditState::sample_outcome`], which advances the generator
//! it is handed.

mod digits;
mod state;
mod unitary;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use digits::DigitString;
pub use state::{apply, QuditState};
pub(crate) use state::sample_index;
pub use unitary::UnitaryMatrix;

use crate::error::{Error, Result};

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// (1/√d)(1, 1, …, 1).
pub fn balanced_state(d: usize) -> Result<QuditState> {
    QuditState::balanced(d)
}

fn fourier(d: usize, sign: f64) -> Result<UnitaryMatrix> {
    check_dim(d)?;
    let scale = 1.0 / (d as f64).sqrt();
    let mut entries = Vec::with_capacity(d * d);
    for k in 0..d {
        for n in 0..d {
            // Reduce nk mod d before scaling so large d keeps exact phases.
            let theta = sign * 2.0 * PI * ((n * k) % d) as f64 / d as f64;
            entries.push(Complex64::from_polar(scale, theta));
        }
    }
    Ok(UnitaryMatrix::from_entries_unchecked(d, entries))
}

/// F_d with entry (k, n) = e^{2πi nk/d}/√d.
pub fn fourier_matrix(d: usize) -> Result<UnitaryMatrix> {
    fourier(d, 1.0)
}

/// F_d⁻¹ with entry (k, n) = e^{−2πi nk/d}/√d.
pub fn inverse_fourier_matrix(d: usize) -> Result<UnitaryMatrix> {
    fourier(d, -1.0)
}

/// diag(1, e^{iφ}, e^{2iφ}, …, e^{i(d−1)φ}).
pub fn phase_evolution(d: usize, phi: f64) -> Result<UnitaryMatrix> {
    check_dim(d)?;
    if !phi.is_finite() {
        return Err(Error::InvalidParameter(format!("phase must be finite, got {phi}")));
    }
    let phases: Vec<f64> = (0..d).map(|j| j as f64 * phi).collect();
    Ok(UnitaryMatrix::diagonal_phases(&phases))
}

/// θ = (2π/d)·Σ_{m≥1} s_m/d^m for the already-known lower digits; `suffix[0]`
/// is the digit one position below the current one.
pub fn compensation_angle(d: usize, suffix: &[u32]) -> Result<f64> {
    check_dim(d)?;
    let base = d as u32;
    if let Some(&digit) = suffix.iter().find(|&&s| s >= base) {
        return Err(Error::InvalidDigit { digit, base });
    }
    let df = d as f64;
    let fraction = suffix.iter().rev().fold(0.0, |acc, &s| (s as f64 + acc) / df);
    Ok(2.0 * PI / df * fraction)
}

/// diag(1, e^{−iθ}, …, e^{−i(d−1)θ}) cancelling the phase carried by `suffix`.
pub fn compensation_unitary(d: usize, suffix: &[u32]) -> Result<UnitaryMatrix> {
    let theta = compensation_angle(d, suffix)?;
    phase_evolution(d, -theta)
}
