use num_complex::Complex64;
use rand::Rng;

use super::UnitaryMatrix;
use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-10;

/// Pure state of a single d-level system.
#[derive(Debug, Clone, PartialEq)]
pub struct QuditState {
    amplitudes: Vec<Complex64>,
}

impl QuditState {
    /// Wraps amplitudes that are already normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidDimension(amplitudes.len()));
        }
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidDimension(amplitudes.len()));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotNormalized(norm * norm));
        }
        Ok(Self { amplitudes: amplitudes.into_iter().map(|a| a / norm).collect() })
    }

    /// Computational basis state |level⟩.
    pub fn basis(dim: usize, level: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        if level >= dim {
            return Err(Error::InvalidParameter(format!("level {level} outside dimension {dim}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[level] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Equal-weight superposition (1/√d)Σ|j⟩.
    pub fn balanced(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self { amplitudes: vec![a; dim] })
    }

    /// Counting state (1/√d)Σ e^{2πi jn/d}|n⟩, i.e. column j of F_d.
    pub fn counting(dim: usize, j: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let scale = 1.0 / (dim as f64).sqrt();
        let amplitudes = (0..dim)
            .map(|n| {
                let theta = 2.0 * std::f64::consts::PI * ((j * n) % dim) as f64 / dim as f64;
                Complex64::from_polar(scale, theta)
            })
            .collect();
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by e^{iθ}.
    pub fn with_global_phase(&self, theta: f64) -> Self {
        let p = Complex64::from_polar(1.0, theta);
        Self { amplitudes: self.amplitudes.iter().map(|a| a * p).collect() }
    }

    /// Representative with the first non-negligible amplitude real and positive.
    pub fn canonical(&self) -> Self {
        let pivot = self.amplitudes.iter().find(|a| a.norm() > 1e-12).copied();
        match pivot {
            Some(p) => {
                let rot = p.conj() / p.norm();
                Self { amplitudes: self.amplitudes.iter().map(|a| a * rot).collect() }
            }
            None => self.clone(),
        }
    }

    /// Equality up to global phase, within `tol` per amplitude.
    pub fn approx_eq_up_to_phase(&self, other: &Self, tol: f64) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let a = self.canonical();
        let b = other.canonical();
        a.amplitudes.iter().zip(&b.amplitudes).all(|(x, y)| (x - y).norm() <= tol)
    }

    /// Born-rule outcome probabilities |a_j|².
    pub fn born_probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Draws a single computational-basis outcome.
    pub fn sample_outcome<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        sample_index(&self.born_probabilities(), rng)
    }
}

/// Matrix-vector product U|s⟩.
pub fn apply(u: &UnitaryMatrix, state: &QuditState) -> Result<QuditState> {
    let amplitudes = u.mul_vec(state.amplitudes())?;
    Ok(QuditState { amplitudes })
}

/// Inverse-CDF sampling from a probability vector. Any roundoff mass past the
/// last bin falls into the last outcome with nonzero weight.
pub(crate) fn sample_index<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (j, &p) in probabilities.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = j;
        }
        acc += p;
        if u < acc {
            return j;
        }
    }
    last_nonzero
}
