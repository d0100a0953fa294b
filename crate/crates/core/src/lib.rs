//! Base-d semi-classical Fourier phase estimation for magnetometry.
//!
//! A qudit sensor accumulates a field-dependent phase during delays
//! d^k·τ₀ and is read out one base-d digit at a time, most significant
//! digit last, with classical feedback compensating the digits already
//! measured. The crate provides:
//!
//! - [`qudit`]: states, unitaries, Fourier transforms and digit strings.
//! - [`protocol`]: the estimation loop with ideal or transmon phase oracles.
//! - [`analysis`]: posterior densities and precision budgets.
//! - [`transmon`]: the flux-tunable transmon spectrum and its magnetic moment.
//! - [`pulse`]: rf-pulse design for qutrit preparation and readout.
//! - [`cli`]: configuration and the subcommands behind the `qudit-mag` binary.
//!
//! ```
//! use qudit_metrology::protocol::{run_fourier_estimation, LinearPhaseOracle, Mode, ProtocolConfig};
//!
//! let cfg = ProtocolConfig::new(3, 4, 1e-6, 3e-6, Mode::Analytic, 7).unwrap();
//! // A field worth exactly the trits 2,1,0,2 of H₀ = 3e-6 T.
//! let h = cfg.field_range() * (2.0 / 3.0 + 1.0 / 9.0 + 0.0 / 27.0 + 2.0 / 81.0);
//! let est = run_fourier_estimation(&cfg, &LinearPhaseOracle::for_field(&cfg, h)).unwrap();
//! assert_eq!(est.digits.digits(), &[2, 1, 0, 2]);
//! ```

pub mod analysis;
pub mod cli;
pub mod constants;
pub mod error;
pub mod numeric;
pub mod protocol;
pub mod pulse;
pub mod qudit;
pub mod transmon;

pub use error::{Error, Result};
