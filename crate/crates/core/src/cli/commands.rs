use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Backend, ExperimentConfig};
use super::output::{create, read_t2_table, write_density, write_json, write_records, write_unitary};
use crate::analysis::{density_profile, heisenberg_precision, max_steps, symmetric_grid, t2_limited_precision, PosteriorSpec, ResourceBudget};
use crate::constants;
use crate::error::{Error, Result};
use crate::protocol::{
    decode_field, run_rng, run_with_cycle, transmon_backend, Estimate, LinearPhaseOracle, Mode, PhaseOracle,
    ProtocolConfig, RamseyCycle, TransmonOracle,
};
use crate::pulse::{iq_pulse_settings, protocol_unitaries, solve_transcendental, synthesize_waveform, PulseRole, PulseSolution, Residuals};
use crate::qudit::{DigitString, UnitaryMatrix};
use crate::transmon::{optimal_bias, optimal_bias_with_coherence, BiasReport, CoherentBiasReport, TransmonParams};

#[derive(Debug, Clone)]
enum Oracle {
    Linear(LinearPhaseOracle),
    Transmon(TransmonOracle),
}

impl PhaseOracle for Oracle {
    fn phase(&self, delay: f64) -> f64 {
        match self {
            Oracle::Linear(o) => o.phase(delay),
            Oracle::Transmon(o) => o.phase(delay),
        }
    }

    fn free_evolution(&self, dim: usize, delay: f64) -> Result<UnitaryMatrix> {
        match self {
            Oracle::Linear(o) => o.free_evolution(dim, delay),
            Oracle::Transmon(o) => o.free_evolution(dim, delay),
        }
    }
}

/// A configured experiment ready to run for any true field.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub protocol: ProtocolConfig,
    pub backend: Backend,
    pub device: TransmonParams,
    /// Φ_c in webers.
    pub bias: f64,
    /// μ(Φ_c), J/T.
    pub moment: f64,
    cycle: RamseyCycle,
}

impl Experiment {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let p = &cfg.protocol;
        let device = cfg.device.params()?;
        let bias = cfg.device.bias_weber();
        let moment = device.magnetic_moment(bias);
        let min_delay = match p.min_delay {
            Some(t) => t,
            None if moment != 0.0 => 2.0 * PI * constants::active().hbar / (moment.abs() * p.field_range),
            None => {
                return Err(Error::Config(
                    "protocol.min_delay is required when the device has no magnetic moment at the bias".into(),
                ))
            }
        };
        let protocol = ProtocolConfig::new(p.base, p.steps, min_delay, p.field_range, p.mode, p.seed)?;
        let cycle = match (p.backend, p.base) {
            (Backend::Transmon, 3) => {
                let pulses = protocol_unitaries(&solve_transcendental()?)?;
                RamseyCycle::new(pulses.preparation, pulses.readout)?
            }
            (Backend::Transmon, d) => {
                log::warn!("rf pulses are designed for qutrits only; using the ideal cycle for d = {d}");
                RamseyCycle::ideal(d)?
            }
            (Backend::Ideal, d) => RamseyCycle::ideal(d)?,
        };
        Ok(Self { protocol, backend: p.backend, device, bias, moment, cycle })
    }

    /// True field H (tesla) described by the `[field]` section.
    pub fn true_field(&self, cfg: &ExperimentConfig) -> Result<f64> {
        let f = &cfg.field;
        if let Some(h) = f.field {
            return Ok(h);
        }
        if let Some(q) = f.flux {
            return Ok((q * constants::active().flux_quantum - self.bias) / self.device.loop_area);
        }
        if let Some(digits) = &f.digits {
            let ds = DigitString::new(self.protocol.base() as u32, digits.clone())?;
            return Ok(decode_field(&ds, self.protocol.field_scale()));
        }
        Ok(0.0)
    }

    fn oracle(&self, field: f64) -> Result<Oracle> {
        Ok(match self.backend {
            Backend::Ideal => Oracle::Linear(LinearPhaseOracle::for_field(&self.protocol, field)),
            Backend::Transmon => {
                Oracle::Transmon(transmon_backend(&self.device, self.bias + self.device.loop_area * field, self.bias)?)
            }
        })
    }

    /// Runs one estimation on ChaCha stream `stream`.
    pub fn estimate(&self, field: f64, stream: u64) -> Result<Estimate> {
        let oracle = self.oracle(field)?;
        let mut rng = run_rng(self.protocol.seed, stream);
        run_with_cycle(&self.protocol, &oracle, &self.cycle, &mut rng)
    }

    /// Field read off a digit string. The digits encode φ(τ₀)/2π mod 1; the
    /// transmon backend maps that back through μ, including its sign.
    pub fn field_estimate(&self, digits: &DigitString) -> f64 {
        let fraction = digits.value() / digits.base() as f64;
        match self.backend {
            Backend::Ideal => self.protocol.field_range() * fraction,
            Backend::Transmon => {
                let scale = 2.0 * PI * constants::active().hbar / (self.moment.abs() * self.protocol.min_delay());
                let f = if self.moment < 0.0 { (1.0 - fraction).rem_euclid(1.0) } else { fraction };
                scale * f
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorSummary {
    pub reference_phase: f64,
    pub peak_density: f64,
    pub half_width_rad: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BudgetSummary {
    pub min_delay: f64,
    pub longest_delay: f64,
    pub coherence_time: f64,
    pub moment: f64,
    pub heisenberg_precision: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotSummary {
    pub digits: Vec<u32>,
    pub field_estimate: f64,
}

/// Contents of the result JSON written by `run`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult {
    pub base: usize,
    pub steps: usize,
    pub backend: Backend,
    pub mode: Mode,
    pub seed: u64,
    pub digits: Vec<u32>,
    pub digit_string: String,
    pub true_field: f64,
    pub field_estimate: f64,
    pub path_probability: f64,
    pub posterior: PosteriorSummary,
    pub budget: BudgetSummary,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub shots: Vec<ShotSummary>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub result: RunResult,
    pub estimate: Estimate,
    pub records_path: PathBuf,
    pub result_path: PathBuf,
}

/// `run`: one estimation (plus extra shots), records CSV and result JSON.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let exp = Experiment::new(cfg)?;
    let field = exp.true_field(cfg)?;
    let estimate = exp.estimate(field, 0)?;
    let shots = if cfg.protocol.shots > 1 {
        (0..cfg.protocol.shots as u64)
            .into_par_iter()
            .map(|s| {
                let e = exp.estimate(field, s)?;
                Ok(ShotSummary { field_estimate: exp.field_estimate(&e.digits), digits: e.digits.digits().to_vec() })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    let p = &exp.protocol;
    let spec = PosteriorSpec::from_digits(&estimate.digits)?;
    let budget = ResourceBudget::new(p.base() as u32, p.steps() as u32, p.min_delay())?;
    let result = RunResult {
        base: p.base(),
        steps: p.steps(),
        backend: exp.backend,
        mode: p.mode,
        seed: p.seed,
        digits: estimate.digits.digits().to_vec(),
        digit_string: estimate.digits.to_string(),
        true_field: field,
        field_estimate: exp.field_estimate(&estimate.digits),
        path_probability: estimate.path_probability(),
        posterior: PosteriorSummary {
            reference_phase: spec.reference_phase,
            peak_density: spec.peak_density(),
            half_width_rad: spec.peak_half_width(),
        },
        budget: BudgetSummary {
            min_delay: p.min_delay(),
            longest_delay: p.delay(p.steps() - 1),
            coherence_time: budget.total_time,
            moment: exp.moment,
            heisenberg_precision: (exp.moment != 0.0)
                .then(|| heisenberg_precision(p.base() as u32, budget.total_time, exp.moment.abs())),
        },
        shots,
    };
    let records_path = cfg.output.path(&cfg.output.records);
    let result_path = cfg.output.path(&cfg.output.result);
    write_records(create(&records_path)?, p.base(), &estimate.records)?;
    write_json(&result_path, &result)?;
    Ok(RunOutcome { result, estimate, records_path, result_path })
}

#[derive(Debug, Clone, Default)]
pub struct SolvePulseOptions {
    /// Directory for `readout_unitary.csv` and `preparation_unitary.csv`.
    pub emit_unitaries: Option<PathBuf>,
    /// Waveform CSV path.
    pub emit_waveform: Option<PathBuf>,
    pub role: Option<PulseRole>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PulseReport {
    pub solution: PulseSolution,
    pub residuals: Residuals,
    /// τ_p = ε₀/|δω|, seconds.
    pub duration: f64,
    pub readout_phases: [f64; 3],
    pub files: Vec<PathBuf>,
}

impl PulseReport {
    pub fn render(&self) -> String {
        let s = &self.solution;
        let r = &self.residuals;
        let mut out = format!(
            "epsilon0 = {:.4}\nxi0 = {:.4}\ndelta0 = {:.4}\nresidual_modulus = {:e}\nresidual_phase = {:e}\nresidual_amplitude = {:e}\npulse_duration_s = {:e}\n",
            s.epsilon, s.xi, s.delta, r.modulus, r.phase, r.amplitude, self.duration
        );
        for f in &self.files {
            out.push_str(&format!("wrote {}\n", f.display()));
        }
        out
    }
}

/// `solve-pulse`: root of the equal-modulus system and optional artifacts.
pub fn solve_pulse(cfg: &ExperimentConfig, opts: &SolvePulseOptions) -> Result<PulseReport> {
    let solution = solve_transcendental()?;
    let residuals = solution.residuals();
    if residuals.max() > 1e-10 {
        return Err(Error::SolverFailure(format!("residuals too large: {residuals:?}")));
    }
    let pulses = protocol_unitaries(&solution)?;
    let duration = solution.duration(cfg.pulse.detuning);
    let mut files = Vec::new();
    if let Some(dir) = &opts.emit_unitaries {
        for (name, u) in [("readout_unitary.csv", &pulses.readout), ("preparation_unitary.csv", &pulses.preparation)] {
            let path = dir.join(name);
            write_unitary(create(&path)?, u)?;
            files.push(path);
        }
    }
    if let Some(path) = &opts.emit_waveform {
        let device = cfg.device.params()?;
        let q = &cfg.pulse;
        let role = opts.role.unwrap_or(PulseRole::Readout);
        let settings = iq_pulse_settings(role, &device, cfg.device.bias_weber(), q.detuning, q.v1, q.v2, q.sample_rate)?;
        let wave = synthesize_waveform(&settings, duration)?;
        wave.write_csv(create(path)?)?;
        files.push(path.clone());
    }
    Ok(PulseReport { solution, residuals, duration, readout_phases: pulses.readout_phases, files })
}

#[derive(Debug, Clone)]
pub struct DensityOptions {
    pub bases: Vec<u32>,
    pub steps: u32,
    /// Half-span of the δφ grid, radians.
    pub span: f64,
    pub points: usize,
    pub out_dir: PathBuf,
}

pub fn density_file_name(base: u32, steps: u32) -> String {
    format!("density_d{base}_k{steps}.csv")
}

/// `density`: posterior density against δφ = φ − φ̃ for each base.
pub fn emit_density(opts: &DensityOptions) -> Result<Vec<PathBuf>> {
    if opts.points < 2 || !(opts.span.is_finite() && opts.span > 0.0) {
        return Err(Error::Config("density grid needs at least two points and a positive span".into()));
    }
    let grid = symmetric_grid(opts.span, opts.points);
    let mut paths = Vec::new();
    for &d in &opts.bases {
        let spec = PosteriorSpec::new(d, opts.steps, 0.0).map_err(|e| Error::Config(e.to_string()))?;
        let rows = density_profile(&spec, grid.iter().copied());
        let path = opts.out_dir.join(density_file_name(d, opts.steps));
        write_density(create(&path)?, &rows)?;
        paths.push(path);
    }
    Ok(paths)
}

#[derive(Debug, Clone)]
pub struct BiasOptions {
    pub t2_table: Option<PathBuf>,
    /// T₂ used for the sensitivity estimate, seconds.
    pub t2: f64,
    /// Overrides the moment used for the sensitivity estimate, in Bohr magnetons.
    pub moment_bohr: Option<f64>,
    /// τ₀ for the step-count report; defaults to protocol.min_delay.
    pub min_delay: Option<f64>,
    pub points: usize,
    pub out: Option<PathBuf>,
}

impl Default for BiasOptions {
    fn default() -> Self {
        Self { t2_table: None, t2: 1e-6, moment_bohr: None, min_delay: None, points: 2001, out: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sensitivity {
    pub base: u32,
    pub moment: f64,
    pub moment_bohr: f64,
    pub t2: f64,
    /// δH = 2πħ/(μ·d·T₂), tesla.
    pub precision: f64,
    pub min_delay: Option<f64>,
    pub max_steps: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BiasSummary {
    pub bias_quanta: f64,
    pub report: BiasReport,
    pub coherence: Option<CoherentBiasReport>,
    pub sensitivity: Sensitivity,
}

/// `optimize-bias`: working point, optional μ·T₂ optimum and sensitivity.
pub fn optimize_bias(cfg: &ExperimentConfig, opts: &BiasOptions) -> Result<BiasSummary> {
    let device = cfg.device.params()?;
    let report = optimal_bias(&device)?;
    let coherence = match &opts.t2_table {
        Some(path) => Some(optimal_bias_with_coherence(&device, &read_t2_table(path)?, opts.points)?),
        None => None,
    };
    let mu_b = constants::active().bohr_magneton;
    let moment = match opts.moment_bohr {
        Some(m) => m * mu_b,
        None => coherence.as_ref().map_or(report.moment, |c| c.moment).abs(),
    };
    let t2 = coherence.as_ref().map_or(opts.t2, |c| c.t2);
    let base = cfg.protocol.base as u32;
    let min_delay = opts.min_delay.or(cfg.protocol.min_delay);
    let max_steps = match min_delay {
        Some(t0) if t0 <= t2 => Some(max_steps(base, t2, t0)?),
        _ => None,
    };
    let sensitivity = Sensitivity {
        base,
        moment,
        moment_bohr: moment / mu_b,
        t2,
        precision: t2_limited_precision(moment, base, t2),
        min_delay,
        max_steps,
    };
    let summary = BiasSummary {
        bias_quanta: report.flux / constants::active().flux_quantum,
        report,
        coherence,
        sensitivity,
    };
    if let Some(out) = &opts.out {
        write_json(out, &summary)?;
    }
    Ok(summary)
}

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub runs: usize,
    /// True fields (tesla); defaults to the configured field.
    pub fields: Option<Vec<f64>>,
    pub out_dir: PathBuf,
}

pub const SWEEP_HEADER: &str = "field_t,run,digits,field_estimate_t,abs_error_t";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub field: f64,
    pub run: usize,
    pub digits: String,
    pub field_estimate: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSummary {
    pub field: f64,
    /// counts[i][j]: outcome j at the i-th executed step (k = K−1−i).
    pub outcome_counts: Vec<Vec<usize>>,
    pub mean_abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub runs: usize,
    pub seed: u64,
    pub fields: Vec<FieldSummary>,
}

/// `sweep`: independent runs per field on derived streams, fanned out over
/// worker threads. Output order does not depend on scheduling.
pub fn sweep(cfg: &ExperimentConfig, opts: &SweepOptions) -> Result<(SweepSummary, Vec<SweepRow>)> {
    if opts.runs == 0 {
        return Err(Error::Config("sweep needs at least one run".into()));
    }
    let exp = Experiment::new(cfg)?;
    let fields = match &opts.fields {
        Some(f) if !f.is_empty() => f.clone(),
        _ => vec![exp.true_field(cfg)?],
    };
    let d = exp.protocol.base();
    let jobs: Vec<(usize, usize)> = (0..fields.len()).flat_map(|f| (0..opts.runs).map(move |r| (f, r))).collect();
    let estimates = jobs
        .par_iter()
        .map(|&(f, r)| exp.estimate(fields[f], (f * opts.runs + r) as u64))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(jobs.len());
    let mut summaries: Vec<FieldSummary> = fields
        .iter()
        .map(|&field| FieldSummary { field, outcome_counts: vec![vec![0; d]; exp.protocol.steps()], mean_abs_error: 0.0 })
        .collect();
    for (&(f, r), est) in jobs.iter().zip(&estimates) {
        let field_estimate = exp.field_estimate(&est.digits);
        let abs_error = (field_estimate - fields[f]).abs();
        for (i, rec) in est.records.iter().enumerate() {
            summaries[f].outcome_counts[i][rec.outcome as usize] += 1;
        }
        summaries[f].mean_abs_error += abs_error / opts.runs as f64;
        rows.push(SweepRow { field: fields[f], run: r, digits: est.digits.to_string(), field_estimate, abs_error });
    }

    let mut out = create(&opts.out_dir.join("sweep.csv"))?;
    use std::io::Write;
    writeln!(out, "{SWEEP_HEADER}")?;
    for row in &rows {
        writeln!(out, "{:e},{},{},{:e},{:e}", row.field, row.run, row.digits, row.field_estimate, row.abs_error)?;
    }
    out.flush()?;
    let summary = SweepSummary { runs: opts.runs, seed: exp.protocol.seed, fields: summaries };
    write_json(&opts.out_dir.join("sweep_summary.json"), &summary)?;
    Ok((summary, rows))
}

/// Reads the waveform CSV at `path`.
pub fn load_waveform(path: &Path) -> Result<crate::pulse::Waveform> {
    let f = std::fs::File::open(path)?;
    crate::pulse::Waveform::read_csv(std::io::BufReader::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::Override;

    fn cfg(args: &[&str]) -> ExperimentConfig {
        let o: Vec<_> = args.iter().map(|a| Override::parse(a).unwrap()).collect();
        ExperimentConfig::load(None, &o).unwrap()
    }

    #[test]
    fn exact_digits_are_recovered() {
        let c = cfg(&["--field.digits=[2,0,1,1]", "--protocol.steps=4"]);
        let exp = Experiment::new(&c).unwrap();
        let h = exp.true_field(&c).unwrap();
        let est = exp.estimate(h, 0).unwrap();
        assert_eq!(est.digits.digits(), &[2, 0, 1, 1]);
        assert!((exp.field_estimate(&est.digits) - h).abs() < 1e-18);
    }

    #[test]
    fn transmon_backend_recovers_digits() {
        let c = cfg(&["--protocol.backend=transmon", "--field.digits=[1,2,0]"]);
        let exp = Experiment::new(&c).unwrap();
        let h = exp.true_field(&c).unwrap();
        let est = exp.estimate(h, 0).unwrap();
        // μ < 0 at the default bias, so the digits encode −H mod H₀.
        assert!(exp.moment < 0.0);
        assert_eq!(est.digits.digits(), &[1, 1, 0]);
        assert!((exp.field_estimate(&est.digits) - h).abs() < 1e-6 * c.protocol.field_range);
    }

    #[test]
    fn pulse_report_rounds_to_known_digits() {
        let r = solve_pulse(&ExperimentConfig::default(), &SolvePulseOptions::default()).unwrap();
        let text = r.render();
        assert!(text.contains("epsilon0 = 0.8525"), "{text}");
        assert!(text.contains("xi0 = 2.0205"));
        assert!(text.contains("delta0 = 1.2953"));
    }

    #[test]
    fn sensitivity_example() {
        let opts = BiasOptions { moment_bohr: Some(1e5), t2: 1e-6, ..Default::default() };
        let s = optimize_bias(&ExperimentConfig::default(), &opts).unwrap();
        assert!((s.sensitivity.precision - 0.238e-9).abs() < 0.002e-9, "{}", s.sensitivity.precision);
    }
}
