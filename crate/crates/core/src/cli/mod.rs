//! Configuration, subcommands and output formats behind the `qudit-mag`
//! binary. Every subcommand is an ordinary function so it can be driven
//! from tests and examples without spawning a process.

pub mod commands;
pub mod config;
pub mod output;

use std::path::Path;

pub use commands::{
    emit_density, optimize_bias, run_experiment, solve_pulse, sweep, BiasOptions, DensityOptions, Experiment,
    RunOutcome, RunResult, SolvePulseOptions, SweepOptions,
};
pub use config::{Backend, ExperimentConfig, Override};

use crate::constants::{self, PhysicalConstants};
use crate::error::{Error, Result};

/// Environment variable naming an alternative constants table (TOML).
pub const CONSTANTS_ENV: &str = "QUDIT_MAG_CONSTANTS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_SOLVER: u8 = 3;
pub const EXIT_IO: u8 = 4;

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::SolverFailure(_) | Error::InconsistentSolution(_) | Error::Oracle { .. } => EXIT_SOLVER,
        _ => EXIT_CONFIG,
    }
}

/// Installs the table named by [`CONSTANTS_ENV`], if set. Returns the
/// table that ends up active.
pub fn install_constants_from_env() -> Result<&'static PhysicalConstants> {
    if let Some(path) = std::env::var_os(CONSTANTS_ENV) {
        let table = PhysicalConstants::from_file(Path::new(&path))?;
        constants::install(table)?;
    }
    Ok(constants::active())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_are_distinct() {
        let io = exit_code(&Error::Io(std::io::Error::other("x")));
        let solver = exit_code(&Error::SolverFailure("x".into()));
        let config = exit_code(&Error::Config("x".into()));
        assert_eq!((config, solver, io), (EXIT_CONFIG, EXIT_SOLVER, EXIT_IO));
        assert_eq!(exit_code(&Error::Parse("x".into())), EXIT_CONFIG);
    }
}
