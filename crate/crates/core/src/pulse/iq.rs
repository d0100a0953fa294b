use std::f64::consts::{PI, TAU};
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::transmon::TransmonParams;

/// Which of the two protocol pulses a setting produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseRole {
    Readout,
    Preparation,
}

/// Dimensionless envelope Ω(t) on the pulse window.
#[derive(Clone)]
pub enum Envelope {
    Rectangular,
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Envelope {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            Envelope::Rectangular => 1.0,
            Envelope::Custom(f) => f(t),
        }
    }
}

impl fmt::Debug for Envelope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Envelope::Rectangular => f.write_str("Rectangular"),
            Envelope::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// IQ mixer settings. Frequencies are angular (rad/s), amplitudes in volts.
#[derive(Debug, Clone)]
pub struct IqSettings {
    pub a1: f64,
    pub a2: f64,
    pub lo_frequency: f64,
    pub if_frequency: f64,
    pub carrier_phase: f64,
    pub envelope: Envelope,
    /// Samples per second.
    pub sample_rate: f64,
}

/// One cosine component of the mixer output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tone {
    /// rad/s
    pub frequency: f64,
    /// volts
    pub amplitude: f64,
    pub phase: f64,
}

impl IqSettings {
    /// Upper sideband ω_LO + ω_IF carries (A₁−A₂)/4, the lower one (A₁+A₂)/4.
    pub fn tones(&self) -> [Tone; 2] {
        [
            Tone {
                frequency: self.lo_frequency + self.if_frequency,
                amplitude: (self.a1 - self.a2) / 4.0,
                phase: self.carrier_phase,
            },
            Tone {
                frequency: self.lo_frequency - self.if_frequency,
                amplitude: (self.a1 + self.a2) / 4.0,
                phase: -self.carrier_phase,
            },
        ]
    }

    /// V₁ = (A₁−A₂)/4 and V₂ = (A₁+A₂)/4.
    pub fn tone_amplitudes(&self) -> (f64, f64) {
        ((self.a1 - self.a2) / 4.0, (self.a1 + self.a2) / 4.0)
    }

    pub fn voltage(&self, t: f64) -> f64 {
        let omega = self.envelope.value(t);
        if omega == 0.0 {
            return 0.0;
        }
        let [hi, lo] = self.tones();
        omega * (hi.amplitude * (hi.frequency * t + hi.phase).cos() + lo.amplitude * (lo.frequency * t + lo.phase).cos())
    }

    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = envelope;
        self
    }
}

/// Mixer settings for the readout or preparation pulse at bias `reference`.
///
/// `detuning` is the signed δω (rad/s) of the readout pulse; the readout
/// drive sits at ω₀₁ − 2δω and ω₁₂ + 2δω. The preparation pulse uses the
/// opposite detuning and carrier phase π, which flips ε, Δ₁ and Δ₂.
pub fn iq_pulse_settings(
    role: PulseRole,
    device: &TransmonParams,
    reference: f64,
    detuning: f64,
    v1: f64,
    v2: f64,
    sample_rate: f64,
) -> Result<IqSettings> {
    device.validate()?;
    if !(detuning.is_finite() && v1.is_finite() && v2.is_finite()) {
        return Err(Error::InvalidConfiguration("detuning and tone amplitudes must be finite".into()));
    }
    if !(sample_rate.is_finite() && sample_rate > 0.0) {
        return Err(Error::InvalidConfiguration(format!("sample rate must be positive, got {sample_rate}")));
    }
    let w01 = device.transition_frequency(reference, 0);
    let w12 = device.transition_frequency(reference, 1);
    let half_gap = 0.5 * (w01 - w12);
    let (if_frequency, carrier_phase) = match role {
        PulseRole::Readout => (half_gap - 2.0 * detuning, 0.0),
        PulseRole::Preparation => (half_gap + 2.0 * detuning, PI),
    };
    if if_frequency <= 0.0 {
        return Err(Error::InvalidConfiguration(format!(
            "intermediate frequency {if_frequency:e} rad/s is not positive; reduce |δω|"
        )));
    }
    Ok(IqSettings {
        a1: 2.0 * (v1 + v2),
        a2: 2.0 * (v2 - v1),
        lo_frequency: 0.5 * (w01 + w12),
        if_frequency,
        carrier_phase,
        envelope: Envelope::Rectangular,
        sample_rate,
    })
}

/// Uniformly sampled drive voltage.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    sample_rate: f64,
    times: Vec<f64>,
    volts: Vec<f64>,
}

pub const WAVEFORM_HEADER: &str = "t_s,v_volts";

impl Waveform {
    pub fn new(sample_rate: f64, volts: Vec<f64>) -> Result<Self> {
        if !(sample_rate.is_finite() && sample_rate > 0.0) {
            return Err(Error::InvalidParameter(format!("sample rate must be positive, got {sample_rate}")));
        }
        let times = (0..volts.len()).map(|i| i as f64 / sample_rate).collect();
        Ok(Self { sample_rate, times, volts })
    }

    pub fn sample_rate(&self) -> f64 {
        self.sample_rate
    }

    pub fn len(&self) -> usize {
        self.volts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.volts.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn volts(&self) -> &[f64] {
        &self.volts
    }

    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times.iter().copied().zip(self.volts.iter().copied())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{WAVEFORM_HEADER}")?;
        for (t, v) in self.samples() {
            writeln!(out, "{t:e},{v:e}")?;
        }
        Ok(())
    }

    /// Parses the CSV written by [`Waveform::write_csv`]. The sample rate is
    /// recovered from the time column, which must be uniform.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        match lines.next().transpose()? {
            Some(h) if h.trim() == WAVEFORM_HEADER => {}
            other => return Err(Error::Parse(format!("expected header `{WAVEFORM_HEADER}`, found {other:?}"))),
        }
        let mut times = Vec::new();
        let mut volts = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let lineno = i + 2;
            let (t, v) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("line {lineno}: expected two columns")))?;
            let parse = |s: &str| {
                s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("line {lineno}: {e}")))
            };
            times.push(parse(t)?);
            volts.push(parse(v)?);
        }
        let sample_rate = match times.len() {
            0 | 1 => return Err(Error::Parse("waveform needs at least two samples".into())),
            n => (n - 1) as f64 / (times[n - 1] - times[0]),
        };
        let step = 1.0 / sample_rate;
        if let Some(i) = (1..times.len()).find(|&i| ((times[i] - times[i - 1]) - step).abs() > 1e-6 * step) {
            return Err(Error::Parse(format!("non-uniform time grid at sample {i}")));
        }
        Ok(Self { sample_rate, times, volts })
    }
}

/// Samples V(t) of the mixer output over [0, duration].
pub fn synthesize_waveform(settings: &IqSettings, duration: f64) -> Result<Waveform> {
    if !(duration.is_finite() && duration > 0.0) {
        return Err(Error::InvalidConfiguration(format!("pulse duration must be positive, got {duration}")));
    }
    let max_tone = settings.tones().iter().map(|t| t.frequency.abs()).fold(0.0, f64::max) / TAU;
    if settings.sample_rate <= 4.0 * max_tone {
        return Err(Error::InvalidConfiguration(format!(
            "sample rate {:e} Hz must exceed four times the highest tone {:e} Hz",
            settings.sample_rate, max_tone
        )));
    }
    let n = (duration * settings.sample_rate).floor() as usize + 1;
    let volts = (0..n).map(|i| settings.voltage(i as f64 / settings.sample_rate)).collect();
    Waveform::new(settings.sample_rate, volts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(role: PulseRole) -> IqSettings {
        let dev = TransmonParams::example();
        iq_pulse_settings(role, &dev, 0.0, -TAU * 2e6, 0.2, 0.35, 40e9).unwrap()
    }

    #[test]
    fn readout_tones_land_on_shifted_transitions() {
        let dev = TransmonParams::example();
        let dw = -TAU * 2e6;
        let s = settings(PulseRole::Readout);
        let [hi, lo] = s.tones();
        let w01 = dev.transition_frequency(0.0, 0);
        let w12 = dev.transition_frequency(0.0, 1);
        assert!((hi.frequency - (w01 - 2.0 * dw)).abs() < 1e-6 * w01);
        assert!((lo.frequency - (w12 + 2.0 * dw)).abs() < 1e-6 * w12);
        assert!((hi.amplitude - 0.2).abs() < 1e-15);
        assert!((lo.amplitude - 0.35).abs() < 1e-15);
        assert!((s.lo_frequency - 0.5 * (w01 + w12)).abs() < 1e-9 * w01);
    }

    #[test]
    fn preparation_flips_phase_and_detuning() {
        let r = settings(PulseRole::Readout);
        let p = settings(PulseRole::Preparation);
        assert_eq!(p.carrier_phase, PI);
        assert!((p.if_frequency + r.if_frequency - 2.0 * (r.if_frequency + 2.0 * -TAU * 2e6)).abs() < 1e-3);
    }

    #[test]
    fn rejects_negative_if() {
        let dev = TransmonParams::example();
        let huge = dev.charging_energy / crate::constants::active().hbar;
        assert!(iq_pulse_settings(PulseRole::Readout, &dev, 0.0, huge, 1.0, 1.0, 1e11).is_err());
    }

    #[test]
    fn equal_a_gives_single_tone() {
        let mut s = settings(PulseRole::Readout);
        s.a2 = s.a1;
        let [hi, lo] = s.tones();
        assert_eq!(hi.amplitude, 0.0);
        assert_eq!(lo.amplitude, s.a1 / 2.0);
    }

    #[test]
    fn zero_envelope_is_silent() {
        let s = settings(PulseRole::Readout).with_envelope(Envelope::Custom(Arc::new(|_| 0.0)));
        let w = synthesize_waveform(&s, 2e-9).unwrap();
        assert!(w.volts().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn undersampling_rejected() {
        let mut s = settings(PulseRole::Readout);
        s.sample_rate = 10e9;
        assert!(synthesize_waveform(&s, 1e-9).is_err());
    }

    #[test]
    fn csv_round_trip_is_lossless() {
        let w = synthesize_waveform(&settings(PulseRole::Readout), 5e-9).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let back = Waveform::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.volts(), w.volts());
        assert_eq!(back.times(), w.times());
        assert!((back.sample_rate() / w.sample_rate() - 1.0).abs() < 1e-9);
    }
}
