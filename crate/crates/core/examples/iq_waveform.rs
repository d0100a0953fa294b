//! Builds the IQ mixer settings for both pulses and samples the readout
//! waveform.

use std::f64::consts::TAU;

use qudit_metrology::pulse::{iq_pulse_settings, solve_transcendental, synthesize_waveform, PulseRole};
use qudit_metrology::transmon::{FluxPoint, TransmonParams};

fn main() -> qudit_metrology::Result<()> {
    let device = TransmonParams::example();
    let bias = FluxPoint::from_quanta(0.25).weber();
    let detuning = -TAU * 2e6;
    let sol = solve_transcendental()?;
    let duration = sol.duration(detuning);
    for role in [PulseRole::Readout, PulseRole::Preparation] {
        let s = iq_pulse_settings(role, &device, bias, detuning, 0.12, 0.08, 40e9)?;
        println!("{role:?}: A1 = {:.3} V, A2 = {:.3} V, f_LO = {:.4} GHz, f_IF = {:.4} MHz, phase = {:.3}", s.a1, s.a2, s.lo_frequency / TAU / 1e9, s.if_frequency / TAU / 1e6, s.carrier_phase);
        for t in s.tones() {
            println!("    tone {:.6} GHz  amplitude {:.3} V", t.frequency / TAU / 1e9, t.amplitude);
        }
    }
    let s = iq_pulse_settings(PulseRole::Readout, &device, bias, detuning, 0.12, 0.08, 40e9)?;
    let wave = synthesize_waveform(&s, duration)?;
    let peak = wave.volts().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    println!("τ_p = {:.2} ns, {} samples, peak |V| = {peak:.3} V", duration * 1e9, wave.len());
    Ok(())
}
