//! Rf-pulse design for the qutrit protocol: the equal-modulus root, the
//! pulse unitary, its Fourier structure, and IQ-mixed drive waveforms.
//!
//! ```
//! use qudit_metrology::pulse::{protocol_unitaries, solve_transcendental};
//!
//! let sol = solve_transcendental().unwrap();
//! let pulses = protocol_unitaries(&sol).unwrap();
//! assert!((pulses.readout.get(0, 1).norm_sqr() - 1.0 / 3.0).abs() < 1e-9);
//! ```

mod hamiltonian;
mod iq;
mod solver;
mod unitary;

pub use hamiltonian::{detuned_tones, rotating_frame_hamiltonian, RotatingFrameHamiltonian};
pub use iq::{iq_pulse_settings, synthesize_waveform, Envelope, IqSettings, PulseRole, Tone, Waveform, WAVEFORM_HEADER};
pub use solver::{solve_transcendental, transcendental_roots, xi_window, PulseSolution, Residuals};
pub use unitary::{
    canonical_phases, equal_modulus_classification, generator_matrix, protocol_unitaries, pulse_unitary,
    readout_factors, readout_matrix_explicit, ExpMethod, FourierClass, GeneratorMatrix, ProtocolPulses, PulseParams,
};
