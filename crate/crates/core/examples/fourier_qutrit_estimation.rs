//! Estimates a field digit by digit with the ideal qutrit Fourier cycle and
//! prints the per-step audit trail.

use qudit_metrology::protocol::{decode_field, run_fourier_estimation, LinearPhaseOracle, Mode, ProtocolConfig};

fn main() -> qudit_metrology::Result<()> {
    let config = ProtocolConfig::new(3, 5, 1e-6, 2e-9, Mode::Analytic, 11)?;
    let field = 1.234e-9;
    let oracle = LinearPhaseOracle::for_field(&config, field);
    let est = run_fourier_estimation(&config, &oracle)?;

    println!("step  delay [s]   theta [rad]  outcome  probabilities");
    for r in &est.records {
        let probs: Vec<String> = r.probabilities.iter().map(|p| format!("{p:.3}")).collect();
        println!("{:>4}  {:<10.3e}  {:<11.4}  {:>7}  [{}]", r.step, r.delay, r.compensation, r.outcome, probs.join(", "));
    }
    let h = decode_field(&est.digits, config.field_scale());
    println!("digits {} -> H = {h:.4e} T (true {field:.4e} T, lattice {:.2e} T)", est.digits, config.field_range() / 243.0);
    Ok(())
}
