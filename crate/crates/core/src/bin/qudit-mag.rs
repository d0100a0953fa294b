use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qudit_metrology::cli::{self, BiasOptions, DensityOptions, ExperimentConfig, Override, SolvePulseOptions, SweepOptions};
use qudit_metrology::pulse::PulseRole;
use qudit_metrology::Result;

/// Qudit Fourier magnetometry: runs, pulse design and analysis data.
///
/// Config keys can be overridden with --section.key=value.
#[derive(Parser, Debug)]
#[command(name = "qudit-mag", version)]
struct Cli {
    /// TOML experiment configuration.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Role {
    Readout,
    Preparation,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the estimation and write the records CSV and result JSON.
    Run,
    /// Solve for the qutrit readout pulse and optionally emit artifacts.
    SolvePulse {
        /// Directory for the readout and preparation unitaries.
        #[arg(long)]
        emit_unitaries: Option<PathBuf>,
        /// Path for the synthesized drive waveform.
        #[arg(long)]
        emit_waveform: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "readout")]
        role: Role,
    },
    /// Emit posterior density curves.
    Density {
        #[arg(long, value_delimiter = ',', default_value = "3,2")]
        bases: Vec<u32>,
        #[arg(long, default_value_t = 3)]
        steps: u32,
        /// Half-span of the δφ grid in radians.
        #[arg(long, default_value_t = PI)]
        span: f64,
        #[arg(long, default_value_t = 4001)]
        points: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Find the flux bias maximizing the magnetic moment (or μ·T₂).
    OptimizeBias {
        /// CSV with columns phi_wb,t2_s.
        #[arg(long)]
        t2_table: Option<PathBuf>,
        /// T₂ for the sensitivity estimate when no table is given, seconds.
        #[arg(long, default_value_t = 1e-6)]
        t2: f64,
        /// Moment for the sensitivity estimate, Bohr magnetons.
        #[arg(long)]
        moment_bohr: Option<f64>,
        /// τ₀ for the step-count report, seconds.
        #[arg(long)]
        min_delay: Option<f64>,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        /// Also write the report JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeat the estimation over runs and fields in parallel.
    Sweep {
        #[arg(long, default_value_t = 100)]
        runs: usize,
        /// True fields in tesla; defaults to the configured field.
        #[arg(long, value_delimiter = ',')]
        fields: Option<Vec<f64>>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let (overrides, rest): (Vec<String>, Vec<String>) = std::env::args().partition(|a| Override::looks_like(a));
    let args = Cli::parse_from(rest);
    match execute(args, &overrides) {
        Ok(()) => ExitCode::from(cli::EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e))
        }
    }
}

fn execute(args: Cli, raw_overrides: &[String]) -> Result<()> {
    cli::install_constants_from_env()?;
    let overrides = raw_overrides.iter().map(|a| Override::parse(a)).collect::<Result<Vec<_>>>()?;
    let cfg = ExperimentConfig::load(args.config.as_deref(), &overrides)?;
    match args.command {
        Command::Run => {
            let out = cli::run_experiment(&cfg)?;
            println!("digits = {}", out.result.digit_string);
            println!("field_estimate_t = {:e}", out.result.field_estimate);
            println!("wrote {}", out.records_path.display());
            println!("wrote {}", out.result_path.display());
        }
        Command::SolvePulse { emit_unitaries, emit_waveform, role } => {
            let role = match role {
                Role::Readout => PulseRole::Readout,
                Role::Preparation => PulseRole::Preparation,
            };
            let report = cli::solve_pulse(&cfg, &SolvePulseOptions { emit_unitaries, emit_waveform, role: Some(role) })?;
            print!("{}", report.render());
        }
        Command::Density { bases, steps, span, points, out_dir } => {
            for path in cli::emit_density(&DensityOptions { bases, steps, span, points, out_dir })? {
                println!("wrote {}", path.display());
            }
        }
        Command::OptimizeBias { t2_table, t2, moment_bohr, min_delay, points, out } => {
            let summary = cli::optimize_bias(&cfg, &BiasOptions { t2_table, t2, moment_bohr, min_delay, points, out })?;
            let text = serde_json::to_string_pretty(&summary).map_err(|e| qudit_metrology::Error::Io(e.into()))?;
            println!("{text}");
        }
        Command::Sweep { runs, fields, out_dir } => {
            let out_dir = out_dir.unwrap_or_else(|| cfg.output.dir.clone());
            let (summary, _) = cli::sweep(&cfg, &SweepOptions { runs, fields, out_dir: out_dir.clone() })?;
            for f in &summary.fields {
                println!("field_t = {:e}  mean_abs_error_t = {:e}", f.field, f.mean_abs_error);
            }
            println!("wrote {}", out_dir.join("sweep.csv").display());
        }
    }
    Ok(())
}
