//! Kolmogorov–Smirnov check of the sampled protocol against the exact
//! distribution of the estimated phase.

use std::f64::consts::PI;

use qudit_metrology::protocol::{run_rng, run_with_cycle, LinearPhaseOracle, Mode, ProtocolConfig, RamseyCycle};

/// Probability that a K-step run reports the lattice point x, for true
/// phase fraction f, straight from the Fejér kernel: (1/N²)·|Σ_n e^{2πi n(f − x/N)}|².
fn lattice_probability(n: usize, f: f64, x: usize) -> f64 {
    let delta = 2.0 * PI * (f - x as f64 / n as f64);
    let (re, im) = (0..n).fold((0.0, 0.0), |(re, im), m| (re + (m as f64 * delta).cos(), im + (m as f64 * delta).sin()));
    (re * re + im * im) / (n * n) as f64
}

#[test]
fn estimated_phase_follows_fejer_law() {
    let (d, k, runs) = (3usize, 4usize, 20_000usize);
    let n = d.pow(k as u32);
    let fraction = 0.41237;
    let cfg = ProtocolConfig::new(d, k, 1e-6, 1e-9, Mode::Sampled, 77).unwrap();
    let oracle = LinearPhaseOracle::for_field(&cfg, fraction * cfg.field_range());
    let cycle = RamseyCycle::ideal(d).unwrap();

    // Signed lattice offset from the truth, wrapped to (−N/2, N/2].
    let truth = fraction * n as f64;
    let wrap = |x: f64| x - n as f64 * ((x + n as f64 / 2.0) / n as f64).floor();
    let mut offsets: Vec<f64> = (0..runs as u64)
        .map(|r| {
            let est = run_with_cycle(&cfg, &oracle, &cycle, &mut run_rng(cfg.seed, r)).unwrap();
            let x = (est.digits.value() / d as f64 * n as f64).round();
            wrap(x - truth)
        })
        .collect();
    offsets.sort_by(f64::total_cmp);

    let mut exact: Vec<(f64, f64)> = (0..n).map(|x| (wrap(x as f64 - truth), lattice_probability(n, fraction, x))).collect();
    exact.sort_by(|a, b| a.0.total_cmp(&b.0));
    let total: f64 = exact.iter().map(|e| e.1).sum();
    assert!((total - 1.0).abs() < 1e-9);

    // Both CDFs are step functions on the same support; compare at each atom.
    let mut cdf = 0.0;
    let mut sup = 0.0f64;
    let mut idx = 0;
    for (x, p) in &exact {
        cdf += p;
        while idx < offsets.len() && offsets[idx] <= *x + 1e-9 {
            idx += 1;
        }
        sup = sup.max((idx as f64 / runs as f64 - cdf).abs());
    }
    let critical = 1.628 / (runs as f64).sqrt();
    assert!(sup < critical, "KS distance {sup} exceeds {critical}");
}
