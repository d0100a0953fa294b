//! Flux-tunable transmon: Josephson energy, perturbative spectrum, magnetic
//! moment and working-point selection.
//!
//! The spectrum is the leading-order expansion
//! E_n = √(8E_C E_J)(n + ½) − E_J − (E_C/12)(6n² + 6n + 3), so only the
//! √(8E_C E_J) term carries flux dependence into transition frequencies;
//! the −E_J offset cancels in every level difference. Energies are in joules,
//! fluxes in webers, frequencies in rad/s. Charge dispersion (n_g) is
//! exponentially small in the transmon regime and does not enter.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::constants;
use crate::error::{Error, Result};
use crate::numeric::brent_maximize;

/// E_J/E_C range where the device is a well-behaved transmon.
pub const TRANSMON_REGIME: (f64, f64) = (80.0, 200.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmonParams {
    /// E_C, joules.
    pub charging_energy: f64,
    /// E_JΣ = E_J1 + E_J2, joules.
    pub josephson_energy_sum: f64,
    /// a = (E_J1 − E_J2)/E_JΣ.
    pub asymmetry: f64,
    /// SQUID loop area, m².
    pub loop_area: f64,
    /// Gate charge n_g; kept for completeness, unused by the spectrum.
    #[serde(default)]
    pub offset_charge: f64,
}

/// A flux bias, with its reduced form πΦ/Φ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluxPoint(pub f64);

impl FluxPoint {
    pub fn from_quanta(quanta: f64) -> Self {
        Self(quanta * constants::active().flux_quantum)
    }

    pub fn weber(self) -> f64 {
        self.0
    }

    pub fn reduced(self) -> f64 {
        PI * self.0 / constants::active().flux_quantum
    }

    pub fn quanta(self) -> f64 {
        self.0 / constants::active().flux_quantum
    }
}

/// Reasons the perturbative spectrum may be unreliable at a given bias.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectrumWarning {
    /// √(8E_C/E_J) exceeds 0.5.
    WeakJosephson { ratio: f64 },
    /// Level index beyond ~¼√(8E_J/E_C).
    LevelTooHigh { level: usize, bound: f64 },
}

impl TransmonParams {
    pub fn new(charging_energy: f64, josephson_energy_sum: f64, asymmetry: f64, loop_area: f64) -> Result<Self> {
        let p = Self { charging_energy, josephson_energy_sum, asymmetry, loop_area, offset_charge: 0.0 };
        p.validate()?;
        if let Some(msg) = p.regime_warning() {
            log::warn!("{msg}");
        }
        Ok(p)
    }

    /// Builds from energies given as frequencies E/h in hertz.
    pub fn from_frequencies(charging_hz: f64, josephson_sum_hz: f64, asymmetry: f64, loop_area: f64) -> Result<Self> {
        let h = constants::active().planck();
        Self::new(charging_hz * h, josephson_sum_hz * h, asymmetry, loop_area)
    }

    /// E_C/h = 0.3 GHz, E_JΣ/h = 30 GHz, a = 0.3, 15 μm × 15 μm loop.
    pub fn example() -> Self {
        Self::from_frequencies(0.3e9, 30e9, 0.3, 2.25e-10).expect("example device is valid")
    }

    pub fn with_offset_charge(mut self, n_g: f64) -> Self {
        self.offset_charge = n_g;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
            }
        };
        positive("charging energy", self.charging_energy)?;
        positive("Josephson energy", self.josephson_energy_sum)?;
        positive("loop area", self.loop_area)?;
        if !(0.0..=1.0).contains(&self.asymmetry) {
            return Err(Error::InvalidParameter(format!("asymmetry must lie in [0, 1], got {}", self.asymmetry)));
        }
        if !self.offset_charge.is_finite() {
            return Err(Error::InvalidParameter("offset charge must be finite".into()));
        }
        Ok(())
    }

    /// E_JΣ/E_C.
    pub fn energy_ratio(&self) -> f64 {
        self.josephson_energy_sum / self.charging_energy
    }

    pub fn regime_warning(&self) -> Option<String> {
        let r = self.energy_ratio();
        let (lo, hi) = TRANSMON_REGIME;
        (r < lo || r > hi).then(|| format!("E_J/E_C = {r:.1} is outside the transmon range {lo}-{hi}"))
    }

    fn reduced(&self, flux: f64) -> f64 {
        PI * flux / constants::active().flux_quantum
    }

    /// √(cos²f + a²sin²f) with f = πΦ/Φ₀.
    fn flux_factor(&self, flux: f64) -> f64 {
        let (s, c) = self.reduced(flux).sin_cos();
        (c * c + self.asymmetry * self.asymmetry * s * s).sqrt()
    }

    /// E_J(Φ) = E_JΣ√(cos²(πΦ/Φ₀) + a²sin²(πΦ/Φ₀)).
    pub fn josephson_energy(&self, flux: f64) -> f64 {
        self.josephson_energy_sum * self.flux_factor(flux)
    }

    /// ∂E_J/∂Φ.
    pub fn josephson_slope(&self, flux: f64) -> f64 {
        let phi0 = constants::active().flux_quantum;
        let (s, c) = self.reduced(flux).sin_cos();
        let a2 = self.asymmetry * self.asymmetry;
        self.josephson_energy_sum * (PI / phi0) * s * c * (a2 - 1.0) / self.flux_factor(flux)
    }

    /// Plasma energy √(8E_C E_J(Φ)).
    pub fn plasma_energy(&self, flux: f64) -> f64 {
        (8.0 * self.charging_energy * self.josephson_energy(flux)).sqrt()
    }

    /// E_n(Φ) in joules.
    pub fn energy_level(&self, flux: f64, n: usize) -> f64 {
        let n = n as f64;
        let ej = self.josephson_energy(flux);
        (8.0 * self.charging_energy * ej).sqrt() * (n + 0.5)
            - ej
            - self.charging_energy / 12.0 * (6.0 * n * n + 6.0 * n + 3.0)
    }

    /// ω_{n,n+1} = (E_{n+1} − E_n)/ħ = [√(8E_C E_J) − E_C(n+1)]/ħ.
    pub fn transition_frequency(&self, flux: f64, n: usize) -> f64 {
        (self.plasma_energy(flux) - self.charging_energy * (n as f64 + 1.0)) / constants::active().hbar
    }

    /// μ = ħA·∂ω₀₁/∂Φ, evaluated analytically. Negative on (0, Φ₀/2) where
    /// the frequency falls with flux.
    pub fn magnetic_moment(&self, flux: f64) -> f64 {
        // ħ·∂ω₀₁/∂Φ = ∂√(8E_C E_J)/∂Φ = √(8E_C)·E_J'/(2√E_J)
        let ej = self.josephson_energy(flux);
        self.loop_area * (8.0 * self.charging_energy).sqrt() * self.josephson_slope(flux) / (2.0 * ej.sqrt())
    }

    /// φ = [ω₀₁(Φ) − ω₀₁(Φ_c)]·τ.
    pub fn accumulated_phase(&self, reference: f64, flux: f64, delay: f64) -> f64 {
        (self.transition_frequency(flux, 0) - self.transition_frequency(reference, 0)) * delay
    }

    /// Conditions under which the perturbative spectrum degrades at this bias.
    pub fn spectrum_warnings(&self, flux: f64, level: usize) -> Vec<SpectrumWarning> {
        let ej = self.josephson_energy(flux);
        let mut out = Vec::new();
        let ratio = (8.0 * self.charging_energy / ej).sqrt();
        if ratio > 0.5 {
            out.push(SpectrumWarning::WeakJosephson { ratio });
        }
        let bound = 0.25 * (8.0 * ej / self.charging_energy).sqrt();
        if level as f64 > bound {
            out.push(SpectrumWarning::LevelTooHigh { level, bound });
        }
        out
    }
}

/// φ ≈ μ·δH·τ/ħ.
pub fn linearized_phase(moment: f64, field_offset: f64, delay: f64) -> f64 {
    moment * field_offset * delay / constants::active().hbar
}

/// Outcome of the working-point search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasReport {
    /// Bias maximizing |μ| on (0, Φ₀/2), webers.
    pub flux: f64,
    /// μ at that bias, J/T (sign retained).
    pub moment: f64,
    /// ω₀₁ at that bias, rad/s.
    pub frequency: f64,
    /// Bias solving tan²(πΦ/Φ₀) = 1/a, webers.
    pub tan2_candidate_flux: f64,
    /// μ evaluated at the tan² candidate.
    pub tan2_candidate_moment: f64,
    /// π(A/Φ₀)√(8E_C E_JΣ/a), the small-asymmetry closed form.
    pub closed_form_moment: f64,
    /// ω₀₁ at the sweet spot Φ = 0, where μ vanishes.
    pub sweet_spot_frequency: f64,
    /// Set when the optimum sits where the perturbative spectrum fails.
    pub breakdown: bool,
}

/// Grid resolution of the coarse scan before Brent refinement.
const BIAS_GRID: usize = 4096;

/// Maximizes |μ(Φ_c)| over Φ_c ∈ (0, Φ₀/2).
///
/// Symmetric junctions (a = 0) have no interior maximum: |μ| grows until
/// E_J vanishes at Φ₀/2. The report then marks `breakdown` and returns the
/// last grid point. For a = 1 the moment vanishes identically and the search
/// is rejected.
pub fn optimal_bias(device: &TransmonParams) -> Result<BiasReport> {
    device.validate()?;
    let a = device.asymmetry;
    if a >= 1.0 {
        return Err(Error::InvalidParameter("a = 1 gives a flux-independent spectrum (μ ≡ 0)".into()));
    }
    let phi0 = constants::active().flux_quantum;
    let to_flux = |f: f64| f * phi0 / PI;
    let score = |f: f64| device.magnetic_moment(to_flux(f)).abs();

    let step = FRAC_PI_2 / BIAS_GRID as f64;
    let (best_i, _) = (1..BIAS_GRID)
        .map(|i| (i, score(step * i as f64)))
        .fold((1, f64::NEG_INFINITY), |acc, (i, s)| if s > acc.1 { (i, s) } else { acc });

    let mut breakdown = false;
    let f_best = if best_i + 1 >= BIAS_GRID {
        breakdown = true;
        step * best_i as f64
    } else {
        brent_maximize(score, step * (best_i - 1) as f64, step * (best_i + 1) as f64, 1e-14).0
    };
    let flux = to_flux(f_best);
    if !device.spectrum_warnings(flux, 2).is_empty() {
        breakdown = true;
    }
    if breakdown {
        log::warn!("optimal bias lies where the perturbative transmon spectrum breaks down");
    }

    let tan2_f = if a > 0.0 { (1.0 / a.sqrt()).atan() } else { FRAC_PI_2 };
    let tan2_flux = to_flux(tan2_f);
    let closed_form_moment = if a > 0.0 {
        PI * device.loop_area / phi0 * (8.0 * device.charging_energy * device.josephson_energy_sum / a).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(BiasReport {
        flux,
        moment: device.magnetic_moment(flux),
        frequency: device.transition_frequency(flux, 0),
        tan2_candidate_flux: tan2_flux,
        tan2_candidate_moment: device.magnetic_moment(tan2_flux),
        closed_form_moment,
        sweet_spot_frequency: device.transition_frequency(0.0, 0),
        breakdown,
    })
}

/// Measured T₂ at a set of flux biases, linearly interpolated in between.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceTable {
    points: Vec<(f64, f64)>,
}

impl CoherenceTable {
    /// `points` are (flux in Wb, T₂ in s); at least two, any order.
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Parse("coherence table needs at least two rows".into()));
        }
        if points.iter().any(|&(f, t)| !f.is_finite() || !(t.is_finite() && t > 0.0)) {
            return Err(Error::Parse("coherence table entries must be finite with T2 > 0".into()));
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Parse("coherence table has duplicate flux values".into()));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn span(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Linear interpolation; `None` outside the tabulated span.
    pub fn t2(&self, flux: f64) -> Option<f64> {
        let (lo, hi) = self.span();
        if flux < lo || flux > hi {
            return None;
        }
        let i = self.points.partition_point(|p| p.0 <= flux).min(self.points.len() - 1).max(1);
        let (x0, y0) = self.points[i - 1];
        let (x1, y1) = self.points[i];
        Some(y0 + (y1 - y0) * (flux - x0) / (x1 - x0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoherentBiasReport {
    pub flux: f64,
    pub moment: f64,
    pub t2: f64,
    /// |μ|·T₂, J·s/T.
    pub figure_of_merit: f64,
}

/// Grid search for the bias maximizing |μ(Φ_c)|·T₂(Φ_c) over the part of the
/// table inside [0, Φ₀/2].
pub fn optimal_bias_with_coherence(device: &TransmonParams, table: &CoherenceTable, points: usize) -> Result<CoherentBiasReport> {
    device.validate()?;
    let half = 0.5 * constants::active().flux_quantum;
    let (lo, hi) = table.span();
    let (lo, hi) = (lo.max(0.0), hi.min(half));
    if hi <= lo {
        return Err(Error::InvalidParameter("coherence table does not overlap (0, Φ0/2)".into()));
    }
    let points = points.max(2);
    let mut best: Option<CoherentBiasReport> = None;
    for i in 0..points {
        let flux = lo + (hi - lo) * i as f64 / (points - 1) as f64;
        let Some(t2) = table.t2(flux) else { continue };
        let moment = device.magnetic_moment(flux);
        let merit = moment.abs() * t2;
        if best.as_ref().is_none_or(|b| merit > b.figure_of_merit) {
            best = Some(CoherentBiasReport { flux, moment, t2, figure_of_merit: merit });
        }
    }
    best.ok_or_else(|| Error::InvalidParameter("empty bias search".into()))
}
