use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance accepted when building a unitary from user-supplied entries.
const CONSTRUCTION_TOLERANCE: f64 = 1e-10;

/// Dense d×d complex matrix, row-major, known to be unitary.
#[derive(Clone, PartialEq)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl UnitaryMatrix {
    /// Builds a unitary from row-major entries, checking ‖U†U − I‖_max.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension(dim));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        let m = Self { dim, entries };
        let defect = m.unitarity_defect();
        if defect.is_nan() || defect >= CONSTRUCTION_TOLERANCE {
            return Err(Error::NotUnitary(defect));
        }
        Ok(m)
    }

    pub(crate) fn from_entries_unchecked(dim: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal_phases(&vec![0.0; dim])
    }

    /// diag(e^{iθ_0}, …, e^{iθ_{d-1}}).
    pub fn diagonal_phases(phases: &[f64]) -> Self {
        let dim = phases.len();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (j, &theta) in phases.iter().enumerate() {
            entries[j * dim + j] = Complex64::from_polar(1.0, theta);
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                entries.push(self.get(c, r).conj());
            }
        }
        Self { dim: d, entries }
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.iter().map(|z| z.conj()).collect() }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rhs.dim });
        }
        let d = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                for c in 0..d {
                    entries[r * d + c] += a * rhs.get(k, c);
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Applies the matrix to a raw amplitude vector.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        Ok((0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect())
    }

    /// max_{ij} |(U†U − I)_ij|.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0_f64;
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.get(k, r).conj() * self.get(k, c);
                }
                if r == c {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Largest entrywise distance to `other`; infinite if dimensions differ.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise distance after removing the best-matching global phase.
    pub fn max_deviation_up_to_phase(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        let overlap: Complex64 =
            self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum();
        if overlap.norm() == 0.0 {
            return self.max_deviation(other);
        }
        let phase = overlap / overlap.norm();
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for &UnitaryMatrix {
    type Output = UnitaryMatrix;

    /// Panics on dimension mismatch; use [`UnitaryMatrix::try_mul`] otherwise.
    fn mul(self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        self.try_mul(rhs).expect("unitary dimensions must agree")
    }
}

impl fmt::Debug for UnitaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "UnitaryMatrix({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
