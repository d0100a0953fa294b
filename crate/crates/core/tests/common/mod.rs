//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

pub type C = Complex64;
pub type M3 = [[C; 3]; 3];

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn polar(r: f64, theta: f64) -> C {
    C::from_polar(r, theta)
}

pub fn matmul(a: &M3, b: &M3) -> M3 {
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn diag(phases: [f64; 3]) -> M3 {
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        out[i][i] = polar(1.0, phases[i]);
    }
    out
}

/// F₃⁻¹ with entries e^{−2πi jk/3}/√3.
pub fn inverse_dft3() -> M3 {
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for (j, row) in out.iter_mut().enumerate() {
        for (k, z) in row.iter_mut().enumerate() {
            *z = polar(1.0 / 3f64.sqrt(), -2.0 * PI * (j * k) as f64 / 3.0);
        }
    }
    out
}

pub fn from_lib(u: &qudit_metrology::qudit::UnitaryMatrix) -> M3 {
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z = u.get(i, j);
        }
    }
    out
}

pub fn max_dev(a: &M3, b: &M3) -> f64 {
    let mut m = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

/// exp(−iK) for real symmetric K by scaling and squaring of a Taylor series.
pub fn expm_taylor(k: [[f64; 3]; 3]) -> M3 {
    let norm: f64 = k.iter().flatten().map(|x| x.abs()).sum();
    let s = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let scale = 2f64.powi(-s);
    let mut a = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = c(0.0, -k[i][j] * scale);
        }
    }
    let mut result = diag([0.0; 3]);
    let mut term = diag([0.0; 3]);
    for n in 1..30 {
        term = matmul(&term, &a);
        for row in term.iter_mut() {
            for z in row.iter_mut() {
                *z /= n as f64;
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..s {
        result = matmul(&result, &result);
    }
    result
}

/// Time-ordered propagator of i∂ₜa = H(t)a by classical RK4 on each column.
pub fn rk4_propagator<F: Fn(f64) -> [[f64; 3]; 3]>(h: F, duration: f64, steps: usize) -> M3 {
    let dt = duration / steps as f64;
    let rhs = |t: f64, a: &[C; 3]| -> [C; 3] {
        let m = h(t);
        let mut out = [c(0.0, 0.0); 3];
        for i in 0..3 {
            let s: C = (0..3).map(|k| a[k] * m[i][k]).sum();
            out[i] = c(0.0, -1.0) * s;
        }
        out
    };
    let axpy = |a: &[C; 3], k: &[C; 3], f: f64| -> [C; 3] { [a[0] + k[0] * f, a[1] + k[1] * f, a[2] + k[2] * f] };
    let mut u = [[c(0.0, 0.0); 3]; 3];
    for col in 0..3 {
        let mut a = [c(0.0, 0.0); 3];
        a[col] = c(1.0, 0.0);
        for n in 0..steps {
            let t = n as f64 * dt;
            let k1 = rhs(t, &a);
            let k2 = rhs(t + dt / 2.0, &axpy(&a, &k1, dt / 2.0));
            let k3 = rhs(t + dt / 2.0, &axpy(&a, &k2, dt / 2.0));
            let k4 = rhs(t + dt, &axpy(&a, &k3, dt));
            for i in 0..3 {
                a[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
            }
        }
        for i in 0..3 {
            u[i][col] = a[i];
        }
    }
    u
}

/// Golden-section search for the maximum of a unimodal f on [a, b].
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

/// A spectral line found in a sampled real signal.
#[derive(Debug, Clone, Copy)]
pub struct Line {
    /// Hz
    pub frequency: f64,
    /// Cosine amplitude.
    pub amplitude: f64,
}

/// Finds the `count` strongest lines of a real signal: FFT peak picking on a
/// Hann-windowed, zero-padded record, then golden-section refinement of the
/// windowed DTFT magnitude. Also returns the strongest remaining FFT peak
/// as a fraction of the strongest line.
pub fn spectral_lines(samples: &[f64], fs: f64, count: usize) -> (Vec<Line>, f64) {
    let n = samples.len();
    let w: Vec<f64> = (0..n).map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / (n - 1) as f64).cos()).collect();
    let wsum: f64 = w.iter().sum();
    let padded = (4 * n).next_power_of_two();
    let mut buf: Vec<C> = (0..padded).map(|i| if i < n { c(samples[i] * w[i], 0.0) } else { c(0.0, 0.0) }).collect();
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    let mag: Vec<f64> = buf[..padded / 2].iter().map(|z| z.norm()).collect();

    let dtft = |f: f64| -> f64 {
        let s: C = (0..n).map(|i| polar(samples[i] * w[i], -2.0 * PI * f * i as f64 / fs)).sum();
        s.norm()
    };
    let bin = fs / padded as f64;
    let main_lobe = (2.0 * fs / n as f64 / bin).ceil() as usize;
    let mut taken = vec![false; mag.len()];
    let mut lines = Vec::new();
    let mut strongest = 0.0;
    let mut residual = 0.0;
    for round in 0..=count {
        let (idx, &peak) = mag
            .iter()
            .enumerate()
            .filter(|(i, _)| !taken[*i] && *i > 0)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty spectrum");
        if round == count {
            residual = peak / strongest;
            break;
        }
        let f0 = idx as f64 * bin;
        let f = golden_max(dtft, f0 - bin, f0 + bin, 80);
        let amp = 2.0 * dtft(f) / wsum;
        if round == 0 {
            strongest = mag[idx];
        }
        lines.push(Line { frequency: f, amplitude: amp });
        for t in taken.iter_mut().take((idx + 2 * main_lobe).min(mag.len())).skip(idx.saturating_sub(2 * main_lobe)) {
            *t = true;
        }
    }
    lines.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    (lines, residual)
}

/// (1/2π)·sin²(Nx/2)/(N·sin²(x/2)), evaluated directly.
pub fn fejer_density(x: f64, n: f64) -> f64 {
    let s = (x / 2.0).sin();
    if s.abs() < 1e-12 {
        return n / (2.0 * PI);
    }
    let t = (n * x / 2.0).sin();
    t * t / (n * s * s) / (2.0 * PI)
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// One-step outcome distribution written from scratch:
/// P_j = (1/d²)|Σ_m e^{im(ψ − 2πj/d)}|².
pub fn step_distribution(d: usize, psi: f64) -> Vec<f64> {
    (0..d)
        .map(|j| {
            let s: C = (0..d).map(|m| polar(1.0, m as f64 * (psi - 2.0 * PI * j as f64 / d as f64))).sum();
            s.norm_sqr() / (d * d) as f64
        })
        .collect()
}
