//! Heisenberg-limited precision and step counts for qubits versus qutrits.

use qudit_metrology::analysis::{coherence_time, heisenberg_precision, qutrit_step_ratio, steps_required, max_steps};
use qudit_metrology::constants;

fn main() -> qudit_metrology::Result<()> {
    let mu = 1e5 * constants::active().bohr_magneton;
    let t = 1e-6;
    for d in [2u32, 3, 5] {
        println!("d = {d}: δH at T = 1 us is {:.3e} T", heisenberg_precision(d, t, mu));
    }
    for r in [1e-2, 1e-4, 1e-6, 1e-9] {
        println!("r = {r:e}: K(d=2) = {}, K(d=3) = {}", steps_required(2, r)?, steps_required(3, r)?);
    }
    println!("asymptotic step ratio ln2/ln3 = {:.4}", qutrit_step_ratio());
    let tau0 = 10e-9;
    let k = max_steps(3, 1e-6, tau0)?;
    println!("τ0 = 10 ns, T2 = 1 us: K_max = {k}, coherence used {:.3e} s", coherence_time(3, k, tau0)?);
    Ok(())
}
