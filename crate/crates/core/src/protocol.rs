//! The K-step semi-classical Fourier estimation loop.
//!
//! Digits are learned from the least significant one upward. Step `k` uses
//! the delay τ_k = d^k·τ₀, so the accumulated phase is d^k times the phase at
//! τ₀; all higher-weight digits then contribute whole turns and drop out.
//! The digits already found at lower significance are cancelled by a diagonal
//! compensation rotation right before readout.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qudit::{
    self, compensation_angle, fourier_matrix, inverse_fourier_matrix, phase_evolution,
    DigitString, QuditState, UnitaryMatrix,
};
use crate::transmon::TransmonParams;

/// How each digit is read off the outcome distribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Most probable outcome (noiseless single-shot limit).
    Analytic,
    /// One Born-rule sample per step.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    base: usize,
    steps: usize,
    min_delay: f64,
    field_range: f64,
    pub mode: Mode,
    pub seed: u64,
}

impl ProtocolConfig {
    /// `min_delay` is τ₀ in seconds and `field_range` is H₀ in tesla.
    pub fn new(base: usize, steps: usize, min_delay: f64, field_range: f64, mode: Mode, seed: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidDimension(base));
        }
        if steps == 0 {
            return Err(Error::InvalidParameter("at least one step is required".into()));
        }
        if !(min_delay.is_finite() && min_delay > 0.0) {
            return Err(Error::InvalidParameter(format!("minimal delay must be positive, got {min_delay}")));
        }
        if !(field_range.is_finite() && field_range > 0.0) {
            return Err(Error::InvalidParameter(format!("field range must be positive, got {field_range}")));
        }
        if (base as f64).powi(steps as i32) > 2f64.powi(62) {
            return Err(Error::InvalidParameter(format!("{base}^{steps} overflows the delay schedule")));
        }
        Ok(Self { base, steps, min_delay, field_range, mode, seed })
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn min_delay(&self) -> f64 {
        self.min_delay
    }

    pub fn field_range(&self) -> f64 {
        self.field_range
    }

    /// h₀ = H₀/d, the field worth one unit of the most significant digit.
    pub fn field_scale(&self) -> f64 {
        self.field_range / self.base as f64
    }

    /// τ_k = d^k·τ₀.
    pub fn delay(&self, k: usize) -> f64 {
        (self.base as u64).pow(k as u32) as f64 * self.min_delay
    }
}

/// Maps a free-evolution delay to the phase it imprints.
pub trait PhaseOracle {
    /// Relative phase between adjacent levels after `delay` seconds.
    fn phase(&self, delay: f64) -> f64;

    /// The free-evolution unitary for `delay`. The default imprints level j
    /// with j·φ.
    fn free_evolution(&self, dim: usize, delay: f64) -> Result<UnitaryMatrix> {
        let phi = self.phase(delay);
        if !phi.is_finite() {
            return Err(Error::Oracle { delay });
        }
        phase_evolution(dim, phi)
    }
}

/// Ideal sensor with φ(τ) = rate·τ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPhaseOracle {
    /// Phase accumulation rate μH/ħ, rad/s.
    pub rate: f64,
}

impl LinearPhaseOracle {
    pub fn new(rate: f64) -> Self {
        Self { rate }
    }

    /// Sensor whose coupling is implied by the schedule: H₀ accumulates a full
    /// turn in τ₀ (μH₀τ₀/ħ = 2π), so H accumulates 2π·(H/H₀) per τ₀.
    pub fn for_field(config: &ProtocolConfig, field: f64) -> Self {
        Self { rate: 2.0 * PI * field / (config.field_range * config.min_delay) }
    }

    /// φ = μHτ/ħ with the active constants table.
    pub fn from_moment(moment: f64, field: f64) -> Self {
        Self { rate: moment * field / crate::constants::active().hbar }
    }
}

impl PhaseOracle for LinearPhaseOracle {
    fn phase(&self, delay: f64) -> f64 {
        self.rate * delay
    }
}

impl<T: PhaseOracle + ?Sized> PhaseOracle for &T {
    fn phase(&self, delay: f64) -> f64 {
        (**self).phase(delay)
    }

    fn free_evolution(&self, dim: usize, delay: f64) -> Result<UnitaryMatrix> {
        (**self).free_evolution(dim, delay)
    }
}

/// Transmon biased at `reference` while the true flux is `flux`.
///
/// The drive tones sit at ω₀₁(Φ_c) and ω₁₂(Φ_c), so level n picks up
/// [(E_n−E_0)(Φ) − (E_n−E_0)(Φ_c)]·τ/ħ relative to the ground state.
#[derive(Debug, Clone)]
pub struct TransmonOracle {
    device: TransmonParams,
    flux: f64,
    reference: f64,
}

/// Phase oracle backed by the transmon spectrum.
pub fn transmon_backend(device: &TransmonParams, flux: f64, reference: f64) -> Result<TransmonOracle> {
    if !(flux.is_finite() && reference.is_finite()) {
        return Err(Error::InvalidParameter("flux values must be finite".into()));
    }
    let period = crate::constants::active().flux_quantum;
    if (flux - reference).abs() >= period {
        return Err(Error::InvalidParameter("flux and reference must lie within one flux period".into()));
    }
    Ok(TransmonOracle { device: device.clone(), flux, reference })
}

impl TransmonOracle {
    pub fn device(&self) -> &TransmonParams {
        &self.device
    }

    pub fn flux(&self) -> f64 {
        self.flux
    }

    pub fn reference(&self) -> f64 {
        self.reference
    }

    /// Angular frequency shift of level n relative to the ground state.
    fn level_shift(&self, n: usize) -> f64 {
        let hbar = crate::constants::active().hbar;
        let gap = |flux| self.device.energy_level(flux, n) - self.device.energy_level(flux, 0);
        (gap(self.flux) - gap(self.reference)) / hbar
    }
}

impl PhaseOracle for TransmonOracle {
    fn phase(&self, delay: f64) -> f64 {
        let shift = self.device.transition_frequency(self.flux, 0)
            - self.device.transition_frequency(self.reference, 0);
        shift * delay
    }

    fn free_evolution(&self, dim: usize, delay: f64) -> Result<UnitaryMatrix> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        let phases: Vec<f64> = (0..dim).map(|n| self.level_shift(n) * delay).collect();
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::Oracle { delay });
        }
        Ok(UnitaryMatrix::diagonal_phases(&phases))
    }
}

/// Preparation and readout pair used around each free evolution.
///
/// The register starts in |0⟩; `preparation` must map it to an equal-weight
/// superposition and `readout` must undo the matching counting basis. The
/// ideal pair is (F_d, F_d⁻¹); the transmon pair comes from the rf pulses.
#[derive(Debug, Clone)]
pub struct RamseyCycle {
    preparation: UnitaryMatrix,
    readout: UnitaryMatrix,
}

impl RamseyCycle {
    pub fn ideal(dim: usize) -> Result<Self> {
        Ok(Self { preparation: fourier_matrix(dim)?, readout: inverse_fourier_matrix(dim)? })
    }

    pub fn new(preparation: UnitaryMatrix, readout: UnitaryMatrix) -> Result<Self> {
        if preparation.dim() != readout.dim() {
            return Err(Error::DimensionMismatch { expected: preparation.dim(), found: readout.dim() });
        }
        Ok(Self { preparation, readout })
    }

    pub fn dim(&self) -> usize {
        self.readout.dim()
    }

    pub fn preparation(&self) -> &UnitaryMatrix {
        &self.preparation
    }

    pub fn readout(&self) -> &UnitaryMatrix {
        &self.readout
    }

    /// Outcome probabilities |⟨j|U_r·C·U(τ)·U_p|0⟩|² for one step.
    pub fn outcome_probabilities(&self, evolution: &UnitaryMatrix, compensation: &UnitaryMatrix) -> Result<Vec<f64>> {
        let d = self.dim();
        let mut psi = qudit::apply(&self.preparation, &QuditState::basis(d, 0)?)?;
        psi = qudit::apply(evolution, &psi)?;
        psi = qudit::apply(compensation, &psi)?;
        psi = qudit::apply(&self.readout, &psi)?;
        Ok(psi.born_probabilities())
    }
}

/// Audit trail of one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementRecord {
    /// Digit index k (delay d^k·τ₀).
    pub step: usize,
    pub delay: f64,
    /// Compensation angle θ_k applied before readout.
    pub compensation: f64,
    pub outcome: u32,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub digits: DigitString,
    /// Records in execution order (k = K−1 first).
    pub records: Vec<MeasurementRecord>,
}

impl Estimate {
    /// Product of the probabilities of the observed outcomes.
    pub fn path_probability(&self) -> f64 {
        self.records.iter().map(|r| r.probabilities[r.outcome as usize]).product()
    }
}

/// Per-run generator: one ChaCha stream per run index under a shared seed.
pub fn run_rng(seed: u64, run: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run);
    rng
}

/// Runs the full estimation with the ideal Fourier cycle, seeding from the
/// config (stream 0).
pub fn run_fourier_estimation<O: PhaseOracle>(config: &ProtocolConfig, oracle: &O) -> Result<Estimate> {
    let cycle = RamseyCycle::ideal(config.base)?;
    let mut rng = run_rng(config.seed, 0);
    run_with_cycle(config, oracle, &cycle, &mut rng)
}

/// Runs the estimation with an explicit preparation/readout pair and
/// generator. The generator is only consumed in sampled mode.
pub fn run_with_cycle<O, R>(config: &ProtocolConfig, oracle: &O, cycle: &RamseyCycle, rng: &mut R) -> Result<Estimate>
where
    O: PhaseOracle + ?Sized,
    R: Rng + ?Sized,
{
    let d = config.base;
    if cycle.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: cycle.dim() });
    }
    let mut found = vec![0u32; config.steps];
    let mut records = Vec::with_capacity(config.steps);
    for k in (0..config.steps).rev() {
        let delay = config.delay(k);
        let evolution = oracle.free_evolution(d, delay)?;
        let theta = compensation_angle(d, &found[k + 1..])?;
        let compensation = phase_evolution(d, -theta)?;
        let probabilities = cycle.outcome_probabilities(&evolution, &compensation)?;
        let outcome = match config.mode {
            Mode::Analytic => most_probable(&probabilities),
            Mode::Sampled => qudit::sample_index(&probabilities, rng),
        } as u32;
        found[k] = outcome;
        records.push(MeasurementRecord { step: k, delay, compensation: theta, outcome, probabilities });
    }
    Ok(Estimate { digits: DigitString::new(d as u32, found)?, records })
}

/// Ties within this margin of the maximum resolve to the smallest digit.
const TIE_MARGIN: f64 = 1e-12;

/// Index of the largest probability; near-ties go to the smallest index.
pub fn most_probable(probabilities: &[f64]) -> usize {
    let max = probabilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    probabilities.iter().position(|&p| p >= max - TIE_MARGIN).unwrap_or(0)
}

/// Outcome distribution of a single step whose (compensated) phase is `phase`:
/// P_j = (1/d²)|Σ_m e^{im(φ − 2πj/d)}|². For d = 3 this is evaluated through
/// the closed form (1/9)[1 + 2cos(φ − 2πj/3)]².
pub fn outcome_probabilities(d: usize, phase: f64) -> Vec<f64> {
    let df = d as f64;
    if d == 3 {
        return (0..3)
            .map(|j| {
                let c = 1.0 + 2.0 * (phase - 2.0 * PI * j as f64 / 3.0).cos();
                c * c / 9.0
            })
            .collect();
    }
    (0..d)
        .map(|j| {
            let arg = phase - 2.0 * PI * j as f64 / df;
            let sum: Complex64 = (0..d).map(|m| Complex64::from_polar(1.0, m as f64 * arg)).sum();
            sum.norm_sqr() / (df * df)
        })
        .collect()
}

/// Outcome distribution for a step whose true digit is `digit` with an
/// uncompensated residual phase `residual` magnified by `step_scale` = d^{K−1−k}.
pub fn digit_probabilities(digit: u32, residual: f64, d: usize, step_scale: f64) -> Result<Vec<f64>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if digit as usize >= d {
        return Err(Error::InvalidDigit { digit, base: d as u32 });
    }
    let phase = 2.0 * PI * digit as f64 / d as f64 + step_scale * residual;
    Ok(outcome_probabilities(d, phase))
}

/// H = h₀·Σ_k x_k/d^k.
pub fn decode_field(digits: &DigitString, field_scale: f64) -> f64 {
    field_scale * digits.value()
}

/// Sector index j with φ mod 2π in [2πj/d − π/d, 2πj/d + π/d]; boundaries
/// resolve to the smaller index, matching [`most_probable`].
pub fn sector_index(d: usize, phase: f64) -> usize {
    let width = 2.0 * PI / d as f64;
    // Sector j covers x ∈ [j, j+1].
    let x = phase.rem_euclid(2.0 * PI) / width + 0.5;
    let nearest = x.round();
    if (x - nearest).abs() < 1e-12 {
        let upper = nearest as usize % d;
        let lower = (nearest as usize + d - 1) % d;
        upper.min(lower)
    } else {
        x.floor() as usize % d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn config(d: usize, k: usize, mode: Mode) -> ProtocolConfig {
        ProtocolConfig::new(d, k, 1e-6, 1e-6, mode, 3).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(ProtocolConfig::new(1, 3, 1.0, 1.0, Mode::Analytic, 0).is_err());
        assert!(ProtocolConfig::new(3, 0, 1.0, 1.0, Mode::Analytic, 0).is_err());
        assert!(ProtocolConfig::new(3, 2, 0.0, 1.0, Mode::Analytic, 0).is_err());
        assert!(ProtocolConfig::new(3, 2, 1.0, -1.0, Mode::Analytic, 0).is_err());
        let c = config(3, 4, Mode::Analytic);
        assert_eq!(c.delay(3), 27e-6);
        assert_abs_diff_eq!(c.field_scale(), 1e-6 / 3.0);
    }

    #[test]
    fn single_qutrit_step_is_deterministic() {
        let c = config(3, 1, Mode::Analytic);
        // H = h₀ gives φ(τ₀) = 2π/3.
        let oracle = LinearPhaseOracle::for_field(&c, c.field_scale());
        let est = run_fourier_estimation(&c, &oracle).unwrap();
        assert_eq!(est.digits.digits(), &[1]);
        assert_abs_diff_eq!(est.records[0].probabilities[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn qubit_binary_field() {
        let c = config(2, 3, Mode::Analytic);
        let h = c.field_scale() * (1.0 + 0.0 / 2.0 + 1.0 / 4.0);
        let est = run_fourier_estimation(&c, &LinearPhaseOracle::for_field(&c, h)).unwrap();
        assert_eq!(est.digits.digits(), &[1, 0, 1]);
        assert_eq!(est.records.iter().map(|r| r.step).collect::<Vec<_>>(), vec![2, 1, 0]);
        assert_abs_diff_eq!(est.records[1].compensation, PI / 2.0, epsilon = 1e-15);
    }

    #[test]
    fn non_finite_oracle_is_reported() {
        let c = config(3, 2, Mode::Analytic);
        let err = run_fourier_estimation(&c, &LinearPhaseOracle::new(f64::INFINITY)).unwrap_err();
        assert!(matches!(err, Error::Oracle { .. }));
    }

    #[test]
    fn digit_probability_examples() {
        let p = digit_probabilities(1, 0.0, 3, 1.0).unwrap();
        assert_abs_diff_eq!(p[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p[2], 0.0, epsilon = 1e-15);

        assert_abs_diff_eq!(outcome_probabilities(3, 0.0)[0], 1.0, epsilon = 1e-15);

        let p = outcome_probabilities(3, PI / 3.0);
        assert_abs_diff_eq!(p[0], 4.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[1], 4.0 / 9.0, epsilon = 1e-14);
        assert_abs_diff_eq!(p[2], 1.0 / 9.0, epsilon = 1e-14);
        assert_eq!(most_probable(&p), 0);

        assert!(digit_probabilities(3, 0.0, 3, 1.0).is_err());
    }

    #[test]
    fn closed_form_matches_dirichlet_sum_for_qutrits() {
        for i in 0..200 {
            let phase = -7.0 + 0.07 * i as f64;
            let closed = outcome_probabilities(3, phase);
            let sum: Vec<f64> = (0..3)
                .map(|j| {
                    let arg = phase - 2.0 * PI * j as f64 / 3.0;
                    let z: Complex64 = (0..3).map(|m| Complex64::from_polar(1.0, m as f64 * arg)).sum();
                    z.norm_sqr() / 9.0
                })
                .collect();
            for j in 0..3 {
                assert_abs_diff_eq!(closed[j], sum[j], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn decode_examples() {
        let h0 = 2.5e-7;
        assert_abs_diff_eq!(decode_field(&DigitString::new(3, vec![1, 0]).unwrap(), h0), h0);
        assert_abs_diff_eq!(
            decode_field(&DigitString::new(3, vec![2, 2, 2]).unwrap(), h0),
            26.0 * h0 / 9.0,
            epsilon = 1e-22
        );
    }

    #[test]
    fn sector_boundaries() {
        assert_eq!(sector_index(3, 0.0), 0);
        assert_eq!(sector_index(3, PI / 3.0), 0);
        assert_eq!(sector_index(3, PI / 3.0 + 1e-9), 1);
        assert_eq!(sector_index(3, PI), 1);
        assert_eq!(sector_index(3, PI + 1e-9), 2);
        assert_eq!(sector_index(3, 5.0 * PI / 3.0), 0);
        assert_eq!(sector_index(3, 5.0 * PI / 3.0 - 1e-9), 2);
        assert_eq!(sector_index(3, -0.2), 0);
        assert_eq!(sector_index(2, PI / 2.0), 0);
        assert_eq!(sector_index(2, 3.0 * PI / 2.0), 0);
        assert_eq!(sector_index(2, PI), 1);
    }

    #[test]
    fn zero_flux_offset_gives_zero_phase() {
        let device = TransmonParams::example();
        let phi_c = 0.2 * crate::constants::active().flux_quantum;
        let oracle = transmon_backend(&device, phi_c, phi_c).unwrap();
        assert_eq!(oracle.phase(1e-6), 0.0);
        let u = oracle.free_evolution(3, 1e-6).unwrap();
        assert_eq!(u, UnitaryMatrix::identity(3));
    }
}
