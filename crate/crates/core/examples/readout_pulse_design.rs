//! Solves for the equal-modulus rf pulse and checks that it realizes a
//! generalized inverse Fourier transform.

use qudit_metrology::pulse::{
    equal_modulus_classification, protocol_unitaries, pulse_unitary, readout_factors, solve_transcendental, ExpMethod,
};
use qudit_metrology::qudit::{inverse_fourier_matrix, UnitaryMatrix};

fn main() -> qudit_metrology::Result<()> {
    let sol = solve_transcendental()?;
    println!("ε0 = {:.6}, ξ0 = {:.6}, Δ0 = {:.6}", sol.epsilon, sol.xi, sol.delta);
    println!("residuals: {:?}", sol.residuals());

    let pulses = protocol_unitaries(&sol)?;
    println!("readout unitary:\n{:?}", pulses.readout);
    let eig = pulse_unitary(sol.readout(), ExpMethod::Exponential);
    println!("closed form vs eigendecomposition: {:.2e}", pulses.readout.max_deviation(&eig));
    println!("classification: {:?}", equal_modulus_classification(&pulses.readout, 1e-9));

    let (left, right) = readout_factors(sol.epsilon);
    let factored = &(&UnitaryMatrix::diagonal_phases(&left) * &inverse_fourier_matrix(3)?) * &UnitaryMatrix::diagonal_phases(&right);
    println!("D_L·F3⁻¹·D_R deviation: {:.2e}", pulses.readout.max_deviation(&factored));
    println!("U_p·U_r deviation from identity: {:.2e}", (&pulses.preparation * &pulses.readout).max_deviation(&UnitaryMatrix::identity(3)));
    Ok(())
}
