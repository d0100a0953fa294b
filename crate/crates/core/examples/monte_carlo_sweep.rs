//! Sampled-mode runs over a few fields using the same driver as the
//! `sweep` subcommand, written to a temporary directory.

use qudit_metrology::cli::{sweep, ExperimentConfig, Override, SweepOptions};

fn main() -> qudit_metrology::Result<()> {
    let overrides = ["--protocol.mode=sampled", "--protocol.steps=4", "--protocol.seed=42"]
        .iter()
        .map(|s| Override::parse(s))
        .collect::<qudit_metrology::Result<Vec<_>>>()?;
    let cfg = ExperimentConfig::load(None, &overrides)?;
    let out_dir = std::env::temp_dir().join("qudit-mag-sweep-example");
    let fields = vec![1.0e-10, 3.7e-10, 8.15e-10];
    let (summary, _) = sweep(&cfg, &SweepOptions { runs: 2000, fields: Some(fields), out_dir: out_dir.clone() })?;
    for f in &summary.fields {
        println!("H = {:.3e} T: mean |error| = {:.3e} T, first-step counts {:?}", f.field, f.mean_abs_error, f.outcome_counts[0]);
    }
    println!("rows in {}", out_dir.join("sweep.csv").display());
    Ok(())
}
