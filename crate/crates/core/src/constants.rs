//! Physical constants (CODATA 2018).
//!
//! Every physical computation in the crate reads its constants through
//! [`active`]. Unless a different table is installed before first use, this
//! is [`CODATA`].

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Bohr magneton, J/T.
    pub bohr_magneton: f64,
    /// Superconducting flux quantum h/2e, Wb.
    pub flux_quantum: f64,
    /// Elementary charge, C.
    pub elementary_charge: f64,
}

pub const CODATA: PhysicalConstants = PhysicalConstants {
    hbar: 1.054_571_817e-34,
    bohr_magneton: 9.274_010_078_3e-24,
    flux_quantum: 2.067_833_848e-15,
    elementary_charge: 1.602_176_634e-19,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA
    }
}

impl PhysicalConstants {
    /// Planck constant h = 2πħ.
    pub fn planck(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar
    }

    /// Reads a TOML table with the four fields of this struct.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let table: Self = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
        for (name, v) in [
            ("hbar", table.hbar),
            ("bohr_magneton", table.bohr_magneton),
            ("flux_quantum", table.flux_quantum),
            ("elementary_charge", table.elementary_charge),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Config(format!("constant `{name}` must be positive")));
            }
        }
        Ok(table)
    }
}

static ACTIVE: OnceLock<PhysicalConstants> = OnceLock::new();

/// The constants table in effect for this process.
pub fn active() -> &'static PhysicalConstants {
    ACTIVE.get_or_init(|| CODATA)
}

/// Replaces the process-wide table. Only possible before the first call to
/// [`active`]; afterwards the table is frozen.
pub fn install(table: PhysicalConstants) -> Result<()> {
    ACTIVE
        .set(table)
        .map_err(|_| Error::Config("constants table already in use".into()))
}
