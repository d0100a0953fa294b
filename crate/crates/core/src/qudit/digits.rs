use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

/// Base-d digit sequence, most significant first: digit k carries weight d^{-k}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitString {
    base: u32,
    digits: Vec<u32>,
}

impl DigitString {
    pub fn new(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidDimension(base as usize));
        }
        if let Some(&digit) = digits.iter().find(|&&x| x >= base) {
            return Err(Error::InvalidDigit { digit, base });
        }
        Ok(Self { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Σ_k x_k / d^k.
    pub fn value(&self) -> f64 {
        let d = self.base as f64;
        // Horner from the least significant end keeps the sum exact for
        // short strings.
        self.digits.iter().rev().fold(0.0, |acc, &x| x as f64 + acc / d)
    }

    /// (2π/d)·Σ_k x_k/d^k reduced to [0, 2π).
    pub fn reference_phase(&self) -> f64 {
        let phi = 2.0 * PI / self.base as f64 * self.value();
        phi.rem_euclid(2.0 * PI)
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.digits {
            if self.base <= 10 {
                write!(f, "{x}")?;
            } else {
                write!(f, "[{x}]")?;
            }
        }
        Ok(())
    }
}
