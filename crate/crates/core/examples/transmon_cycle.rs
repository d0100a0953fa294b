//! Runs the qutrit protocol on the transmon backend with the designed rf
//! pulses and compares the outcome statistics to the ideal cycle.

use std::f64::consts::PI;

use qudit_metrology::protocol::{outcome_probabilities, RamseyCycle};
use qudit_metrology::pulse::{protocol_unitaries, solve_transcendental};
use qudit_metrology::qudit::{phase_evolution, UnitaryMatrix};

fn main() -> qudit_metrology::Result<()> {
    let pulses = protocol_unitaries(&solve_transcendental()?)?;
    let cycle = RamseyCycle::new(pulses.preparation, pulses.readout)?;
    let none = UnitaryMatrix::identity(3);
    let mut worst = 0.0f64;
    for i in 0..12 {
        let phi = 2.0 * PI * i as f64 / 12.0;
        let p = cycle.outcome_probabilities(&phase_evolution(3, phi)?, &none)?;
        let ideal = outcome_probabilities(3, phi);
        worst = p.iter().zip(&ideal).fold(worst, |w, (a, b)| w.max((a - b).abs()));
        println!("φ = {phi:.3}: P = [{:.4}, {:.4}, {:.4}]", p[0], p[1], p[2]);
    }
    println!("max deviation from (1/9)[1 + 2cos(φ − 2πj/3)]²: {worst:.2e}");
    Ok(())
}
