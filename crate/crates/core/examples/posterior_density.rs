//! Compares the qutrit and qubit posteriors for the same number of steps and
//! the central-peak mass at equal resolution.

use qudit_metrology::analysis::{central_peak_probability, posterior_density, symmetric_grid, PosteriorSpec};

fn main() -> qudit_metrology::Result<()> {
    let qutrit = PosteriorSpec::new(3, 3, 0.0)?;
    let qubit = PosteriorSpec::new(2, 3, 0.0)?;
    println!("{:>10} {:>12} {:>12}", "dphi", "d=3,K=3", "d=2,K=3");
    for x in symmetric_grid(std::f64::consts::PI, 25) {
        println!("{x:>10.4} {:>12.5} {:>12.5}", posterior_density(x, &qutrit), posterior_density(x, &qubit));
    }
    for (d, k) in [(3, 6), (2, 8), (3, 1), (2, 1)] {
        println!("central peak mass d={d} K={k}: {:.6}", central_peak_probability(d, k)?);
    }
    Ok(())
}
