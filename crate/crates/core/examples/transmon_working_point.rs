//! Transmon spectrum versus flux, the |μ|-optimal bias and the resulting
//! field sensitivity for a given T₂.

use qudit_metrology::analysis::t2_limited_precision;
use qudit_metrology::constants;
use qudit_metrology::transmon::{optimal_bias, FluxPoint, TransmonParams};

fn main() -> qudit_metrology::Result<()> {
    let device = TransmonParams::example();
    let c = constants::active();
    println!("E_J/E_C = {:.0}", device.energy_ratio());
    println!("{:>8} {:>12} {:>12} {:>12}", "Φ/Φ0", "f01 [GHz]", "f12 [GHz]", "μ [μ_B]");
    for i in 0..=10 {
        let flux = FluxPoint::from_quanta(0.05 * i as f64).weber();
        println!(
            "{:>8.2} {:>12.4} {:>12.4} {:>12.0}",
            0.05 * i as f64,
            device.transition_frequency(flux, 0) / (2.0 * std::f64::consts::PI * 1e9),
            device.transition_frequency(flux, 1) / (2.0 * std::f64::consts::PI * 1e9),
            device.magnetic_moment(flux) / c.bohr_magneton
        );
    }
    let best = optimal_bias(&device)?;
    println!(
        "max |μ| at Φ/Φ0 = {:.4}: {:.0} μ_B (tan² = 1/a point {:.4}: {:.0} μ_B)",
        best.flux / c.flux_quantum,
        best.moment.abs() / c.bohr_magneton,
        best.tan2_candidate_flux / c.flux_quantum,
        best.tan2_candidate_moment.abs() / c.bohr_magneton
    );
    let dh = t2_limited_precision(best.moment.abs(), 3, 1e-6);
    println!("qutrit precision with T2 = 1 us: {:.3} nT", dh * 1e9);
    Ok(())
}
