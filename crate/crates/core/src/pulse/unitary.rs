use std::f64::consts::PI;

use nalgebra::{Matrix3, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use super::PulseSolution;
use crate::error::{Error, Result};
use crate::qudit::{fourier_matrix, inverse_fourier_matrix, UnitaryMatrix};

/// Dimensionless parameters of a rectangular two-tone pulse: ε = δω·τ_p and
/// the transition amplitudes Δ₁, Δ₂ integrated over τ_p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PulseParams {
    pub epsilon: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl PulseParams {
    pub fn new(epsilon: f64, delta1: f64, delta2: f64) -> Self {
        Self { epsilon, delta1, delta2 }
    }

    /// ξ = √(ε² + Δ₁² + Δ₂²).
    pub fn xi(&self) -> f64 {
        (self.epsilon * self.epsilon + self.delta1 * self.delta1 + self.delta2 * self.delta2).sqrt()
    }

    pub fn negated(&self) -> Self {
        Self::new(-self.epsilon, -self.delta1, -self.delta2)
    }
}

/// Real symmetric generator K with U = exp(−iK).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorMatrix(pub [[f64; 3]; 3]);

/// K = [[0, Δ₁, 0], [Δ₁, 2ε, Δ₂], [0, Δ₂, 0]].
pub fn generator_matrix(epsilon: f64, delta1: f64, delta2: f64) -> GeneratorMatrix {
    GeneratorMatrix([[0.0, delta1, 0.0], [delta1, 2.0 * epsilon, delta2], [0.0, delta2, 0.0]])
}

impl GeneratorMatrix {
    pub fn eigenvalues(&self) -> [f64; 3] {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.to_nalgebra()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2]]
    }

    fn to_nalgebra(self) -> Matrix3<f64> {
        Matrix3::from_fn(|r, c| self.0[r][c])
    }

    /// exp(−iK) through the spectral decomposition K = VΛVᵀ.
    pub fn exponential(&self) -> UnitaryMatrix {
        let eig = SymmetricEigen::new(self.to_nalgebra());
        let v = eig.eigenvectors;
        let phases: Vec<Complex64> = eig.eigenvalues.iter().map(|&l| Complex64::from_polar(1.0, -l)).collect();
        let mut entries = Vec::with_capacity(9);
        for r in 0..3 {
            for c in 0..3 {
                entries.push((0..3).map(|k| phases[k] * v[(r, k)] * v[(c, k)]).sum());
            }
        }
        UnitaryMatrix::from_entries_unchecked(3, entries)
    }
}

/// How [`pulse_unitary`] evaluates exp(−iK).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpMethod {
    /// Three-term expression: null-space projector, cos ξ part, sin ξ/ξ part.
    ClosedForm,
    /// Eigendecomposition of the real symmetric K.
    Exponential,
}

pub fn pulse_unitary(params: PulseParams, method: ExpMethod) -> UnitaryMatrix {
    match method {
        ExpMethod::ClosedForm => closed_form(params),
        ExpMethod::Exponential => generator_matrix(params.epsilon, params.delta1, params.delta2).exponential(),
    }
}

fn closed_form(p: PulseParams) -> UnitaryMatrix {
    let PulseParams { epsilon: e, delta1: d1, delta2: d2 } = p;
    let c = |re: f64| Complex64::new(re, 0.0);
    let d_sq = d1 * d1 + d2 * d2;
    if d_sq == 0.0 {
        // K = diag(0, 2ε, 0).
        return UnitaryMatrix::diagonal_phases(&[0.0, -2.0 * e, 0.0]);
    }
    let xi = p.xi();
    let sinc = if xi == 0.0 { 1.0 } else { xi.sin() / xi };
    let (p11, p13, p33) = (d1 * d1 / d_sq, d1 * d2 / d_sq, d2 * d2 / d_sq);
    let rot = Complex64::from_polar(1.0, -e);
    let cos_part = rot * xi.cos();
    let sin_part = Complex64::i() * rot * sinc;

    let null = [[p33, 0.0, -p13], [0.0, 0.0, 0.0], [-p13, 0.0, p11]];
    let bright = [[p11, 0.0, p13], [0.0, 1.0, 0.0], [p13, 0.0, p33]];
    let mixing = [[e * p11, -d1, e * p13], [-d1, -e, -d2], [e * p13, -d2, e * p33]];
    let mut entries = Vec::with_capacity(9);
    for r in 0..3 {
        for col in 0..3 {
            entries.push(c(null[r][col]) + cos_part * bright[r][col] + sin_part * mixing[r][col]);
        }
    }
    UnitaryMatrix::from_entries_unchecked(3, entries)
}

/// Left and right diagonal phases with U_r = diag(e^{iL})·F₃⁻¹·diag(e^{iR})
/// for the readout pulse at ε₀.
pub fn readout_factors(epsilon0: f64) -> ([f64; 3], [f64; 3]) {
    (
        [0.0, epsilon0 - PI / 3.0, 4.0 * PI / 3.0],
        [-PI / 6.0, epsilon0 - PI / 2.0, -5.0 * PI / 6.0],
    )
}

/// Readout entries written out explicitly in terms of ε₀.
pub fn readout_matrix_explicit(epsilon0: f64) -> UnitaryMatrix {
    let s = 1.0 / 3f64.sqrt();
    let p = |theta: f64| Complex64::from_polar(s, theta);
    let side = p(epsilon0 - PI / 2.0);
    let entries = vec![
        p(-PI / 6.0),
        side,
        p(-5.0 * PI / 6.0),
        side,
        p(2.0 * epsilon0 + PI / 2.0),
        side,
        p(-5.0 * PI / 6.0),
        side,
        p(-PI / 6.0),
    ];
    UnitaryMatrix::from_entries_unchecked(3, entries)
}

/// Outcome of stripping diagonal phases from an equal-modulus 3×3 unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FourierClass {
    Fourier,
    InverseFourier,
    Neither,
}

/// Left/right diagonal phases that bring `u` to a form whose first row and
/// first column are real and positive: U' = diag(e^{iL})·U·diag(e^{iR}).
pub fn canonical_phases(u: &UnitaryMatrix) -> (Vec<f64>, Vec<f64>) {
    let d = u.dim();
    let right: Vec<f64> = (0..d).map(|c| -u.get(0, c).arg()).collect();
    let left: Vec<f64> = (0..d).map(|r| -(u.get(r, 0).arg() + right[0])).collect();
    (left, right)
}

/// Classifies a 3×3 unitary as F₃, F₃⁻¹, or neither, up to left and right
/// diagonal phases. Requires every |U_ij|² = 1/3 within `tol`.
pub fn equal_modulus_classification(u: &UnitaryMatrix, tol: f64) -> FourierClass {
    if u.dim() != 3 || u.entries().iter().any(|z| (z.norm_sqr() - 1.0 / 3.0).abs() > tol) {
        return FourierClass::Neither;
    }
    let (left, right) = canonical_phases(u);
    let core = &(&UnitaryMatrix::diagonal_phases(&left) * u) * &UnitaryMatrix::diagonal_phases(&right);
    let near = |target: &UnitaryMatrix| core.max_deviation(target) < tol.sqrt().max(1e-9);
    if near(&inverse_fourier_matrix(3).expect("d = 3")) {
        FourierClass::InverseFourier
    } else if near(&fourier_matrix(3).expect("d = 3")) {
        FourierClass::Fourier
    } else {
        FourierClass::Neither
    }
}

/// Readout and preparation unitaries of the qutrit protocol.
#[derive(Debug, Clone)]
pub struct ProtocolPulses {
    pub readout: UnitaryMatrix,
    pub preparation: UnitaryMatrix,
    /// χ_j with U_r|Ψ_j⟩ = e^{iχ_j}|j⟩. Informational only.
    pub readout_phases: [f64; 3],
}

/// Builds U_r from (−ε₀, Δ₀, Δ₀) and U_p from (+ε₀, −Δ₀, −Δ₀), and checks
/// that they are adjoint and that U_r is a generalized inverse Fourier map.
pub fn protocol_unitaries(solution: &PulseSolution) -> Result<ProtocolPulses> {
    let readout = pulse_unitary(solution.readout(), ExpMethod::ClosedForm);
    let preparation = pulse_unitary(solution.preparation(), ExpMethod::ClosedForm);
    let adjoint_gap = preparation.max_deviation(&readout.adjoint());
    if adjoint_gap > 1e-10 {
        return Err(Error::InconsistentSolution(format!("U_p differs from U_r† by {adjoint_gap:e}")));
    }
    let class = equal_modulus_classification(&readout, 1e-9);
    if class != FourierClass::InverseFourier {
        return Err(Error::InconsistentSolution(format!("readout pulse classifies as {class:?}")));
    }
    let mut readout_phases = [0.0; 3];
    let ground = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
    let psi0 = preparation.mul_vec(&ground)?;
    for (j, chi) in readout_phases.iter_mut().enumerate() {
        let shift = UnitaryMatrix::diagonal_phases(&[0.0, 2.0 * PI * j as f64 / 3.0, 4.0 * PI * j as f64 / 3.0]);
        let out = readout.mul_vec(&shift.mul_vec(&psi0)?)?;
        *chi = out[j].arg();
    }
    Ok(ProtocolPulses { readout, preparation, readout_phases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn generator_examples() {
        let k = generator_matrix(0.4, 0.0, 0.0);
        assert_eq!(k.0, [[0.0, 0.0, 0.0], [0.0, 0.8, 0.0], [0.0, 0.0, 0.0]]);
        let k = generator_matrix(-0.3, 1.2, -0.7);
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(k.0[r][c], k.0[c][r]);
            }
        }
    }

    #[test]
    fn readout_eigenvalues() {
        let s = crate::pulse::solve_transcendental().unwrap();
        let p = s.readout();
        let ev = generator_matrix(p.epsilon, p.delta1, p.delta2).eigenvalues();
        let mut expected = [0.0, p.epsilon + s.xi, p.epsilon - s.xi];
        expected.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn identity_and_degenerate_cases() {
        let id = UnitaryMatrix::identity(3);
        for m in [ExpMethod::ClosedForm, ExpMethod::Exponential] {
            assert!(pulse_unitary(PulseParams::new(0.0, 0.0, 0.0), m).max_deviation(&id) < 1e-15);
        }
        let a = pulse_unitary(PulseParams::new(0.7, 0.0, 0.0), ExpMethod::ClosedForm);
        let b = pulse_unitary(PulseParams::new(0.7, 0.0, 0.0), ExpMethod::Exponential);
        assert!(a.max_deviation(&b) < 1e-14);
        // Only one amplitude on.
        let a = pulse_unitary(PulseParams::new(0.2, 0.9, 0.0), ExpMethod::ClosedForm);
        let b = pulse_unitary(PulseParams::new(0.2, 0.9, 0.0), ExpMethod::Exponential);
        assert!(a.max_deviation(&b) < 1e-13);
    }

    #[test]
    fn sign_flip_conjugates() {
        let p = PulseParams::new(0.31, -1.4, 0.8);
        let a = pulse_unitary(p.negated(), ExpMethod::ClosedForm);
        let b = pulse_unitary(p, ExpMethod::ClosedForm).conj();
        assert!(a.max_deviation(&b) < 1e-14);
    }

    #[test]
    fn classification() {
        assert_eq!(equal_modulus_classification(&inverse_fourier_matrix(3).unwrap(), 1e-9), FourierClass::InverseFourier);
        assert_eq!(equal_modulus_classification(&fourier_matrix(3).unwrap(), 1e-9), FourierClass::Fourier);
        assert_eq!(equal_modulus_classification(&UnitaryMatrix::identity(3), 1e-9), FourierClass::Neither);
        let dressed = &(&UnitaryMatrix::diagonal_phases(&[0.3, -1.0, 2.0]) * &fourier_matrix(3).unwrap())
            * &UnitaryMatrix::diagonal_phases(&[1.1, 0.4, -0.2]);
        assert_eq!(equal_modulus_classification(&dressed, 1e-9), FourierClass::Fourier);
    }

    #[test]
    fn protocol_pair_is_adjoint() {
        let s = crate::pulse::solve_transcendental().unwrap();
        let pulses = protocol_unitaries(&s).unwrap();
        let prod = &pulses.readout * &pulses.preparation;
        assert!(prod.max_deviation(&UnitaryMatrix::identity(3)) < 1e-10);
        assert_abs_diff_eq!(
            (pulses.readout.get(0, 0) - Complex64::from_polar(1.0 / 3f64.sqrt(), -PI / 6.0)).norm(),
            0.0,
            epsilon = 1e-9
        );
    }
}
