use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::constants;
use crate::error::{Error, Result};
use crate::protocol::Mode;
use crate::transmon::TransmonParams;

/// Phase source used by `run` and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// φ(τ) = 2π(H/H₀)(τ/τ₀) with the ideal Fourier cycle.
    Ideal,
    /// Transmon spectrum; for d = 3 the cycle uses the designed rf pulses.
    Transmon,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProtocolSection {
    pub base: usize,
    pub steps: usize,
    /// τ₀ in seconds. When absent, τ₀ = 2πħ/(|μ(Φ_c)|·H₀).
    pub min_delay: Option<f64>,
    /// H₀ in tesla.
    pub field_range: f64,
    pub mode: Mode,
    pub seed: u64,
    /// Independent repetitions of the whole estimation.
    pub shots: usize,
    pub backend: Backend,
}

impl Default for ProtocolSection {
    fn default() -> Self {
        Self {
            base: 3,
            steps: 3,
            min_delay: None,
            field_range: 1e-9,
            mode: Mode::Analytic,
            seed: 0,
            shots: 1,
            backend: Backend::Ideal,
        }
    }
}

/// Device parameters; energies in joules, area in m², bias in flux quanta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DeviceSection {
    pub charging_energy: f64,
    pub josephson_energy_sum: f64,
    pub asymmetry: f64,
    pub loop_area: f64,
    pub bias_flux: f64,
}

impl Default for DeviceSection {
    fn default() -> Self {
        let d = TransmonParams::example();
        Self {
            charging_energy: d.charging_energy,
            josephson_energy_sum: d.josephson_energy_sum,
            asymmetry: d.asymmetry,
            loop_area: d.loop_area,
            bias_flux: 0.25,
        }
    }
}

impl DeviceSection {
    pub fn params(&self) -> Result<TransmonParams> {
        TransmonParams::new(self.charging_energy, self.josephson_energy_sum, self.asymmetry, self.loop_area)
    }

    pub fn bias_weber(&self) -> f64 {
        self.bias_flux * constants::active().flux_quantum
    }
}

/// The quantity to be estimated. Exactly one of the three may be set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSection {
    /// True field H in tesla.
    pub field: Option<f64>,
    /// True flux in quanta; H = (Φ − Φ_c)/A.
    pub flux: Option<f64>,
    /// Exact base-d encoding; H = (H₀/d)·Σ x_k/d^k.
    pub digits: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseSection {
    /// Signed readout detuning δω, rad/s.
    pub detuning: f64,
    pub v1: f64,
    pub v2: f64,
    /// Samples per second.
    pub sample_rate: f64,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self { detuning: -2.0 * std::f64::consts::PI * 2e6, v1: 0.1, v2: 0.1, sample_rate: 4e10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub records: String,
    pub result: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("."), records: "records.csv".into(), result: "result.json".into() }
    }
}

impl OutputSection {
    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub protocol: ProtocolSection,
    pub device: DeviceSection,
    pub field: FieldSection,
    pub pulse: PulseSection,
    pub output: OutputSection,
}

/// A `--section.key=value` command-line override.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub section: String,
    pub key: String,
    pub value: toml::Value,
}

impl Override {
    /// Parses `section.key=value` (leading dashes optional). The value is read
    /// as a TOML literal and falls back to a plain string.
    pub fn parse(arg: &str) -> Result<Self> {
        let body = arg.trim_start_matches('-');
        let (path, raw) = body
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override `{arg}` must look like --section.key=value")))?;
        let (section, key) = path
            .split_once('.')
            .filter(|(s, k)| !s.is_empty() && !k.is_empty() && !k.contains('.'))
            .ok_or_else(|| Error::Config(format!("override `{arg}` must name exactly section.key")))?;
        let value = toml::from_str::<toml::Table>(&format!("v = {raw}"))
            .ok()
            .and_then(|mut t| t.remove("v"))
            .unwrap_or_else(|| toml::Value::String(raw.to_string()));
        Ok(Self { section: section.into(), key: key.into(), value })
    }

    /// True for arguments shaped like an override rather than a flag.
    pub fn looks_like(arg: &str) -> bool {
        arg.strip_prefix("--")
            .and_then(|s| s.split_once('='))
            .is_some_and(|(path, _)| path.contains('.'))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `path` (or starts from defaults when `None`) and applies the
    /// overrides in order.
    pub fn load(path: Option<&Path>, overrides: &[Override]) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display()))))?,
            None => String::new(),
        };
        let base: Self = toml::from_str(&text).map_err(|e| {
            let name = path.map(|p| p.display().to_string()).unwrap_or_default();
            Error::Config(format!("{name}: {e}"))
        })?;
        if overrides.is_empty() {
            base.validate()?;
            return Ok(base);
        }
        let mut table = toml::Table::try_from(&base).map_err(|e| Error::Config(e.to_string()))?;
        for o in overrides {
            let section = table
                .entry(o.section.clone())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()));
            let toml::Value::Table(section) = section else {
                return Err(Error::Config(format!("`{}` is not a section", o.section)));
            };
            section.insert(o.key.clone(), o.value.clone());
        }
        let cfg: Self = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| {
            Error::Config(format!("override: {}", e.message()))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let p = &self.protocol;
        if p.base < 2 {
            return Err(Error::Config(format!("protocol.base must be at least 2, got {}", p.base)));
        }
        if p.steps == 0 {
            return Err(Error::Config("protocol.steps must be positive".into()));
        }
        if p.shots == 0 {
            return Err(Error::Config("protocol.shots must be positive".into()));
        }
        if !(p.field_range.is_finite() && p.field_range > 0.0) {
            return Err(Error::Config("protocol.field_range must be positive".into()));
        }
        if let Some(t) = p.min_delay {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Config("protocol.min_delay must be positive".into()));
            }
        }
        self.device.params().map_err(|e| Error::Config(format!("device: {e}")))?;
        let f = &self.field;
        let set = [f.field.is_some(), f.flux.is_some(), f.digits.is_some()].iter().filter(|&&b| b).count();
        if set > 1 {
            return Err(Error::Config("field: set only one of `field`, `flux`, `digits`".into()));
        }
        if let Some(digits) = &f.digits {
            if let Some(&x) = digits.iter().find(|&&x| x as usize >= p.base) {
                return Err(Error::Config(format!("field.digits: {x} is not a base-{} digit", p.base)));
            }
        }
        let q = &self.pulse;
        if !(q.sample_rate.is_finite() && q.sample_rate > 0.0) {
            return Err(Error::Config("pulse.sample_rate must be positive".into()));
        }
        if !(q.detuning.is_finite() && q.detuning != 0.0) {
            return Err(Error::Config("pulse.detuning must be finite and nonzero".into()));
        }
        Ok(())
    }
}
