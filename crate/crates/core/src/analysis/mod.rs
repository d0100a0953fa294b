//! Posteriors, success probabilities, resource accounting and precision
//! scalings for the Fourier estimation protocol.

mod posterior;
mod precision;

pub use posterior::{
    central_peak_probability, density_profile, posterior_density, posterior_normalization,
    posterior_product, symmetric_grid, PosteriorSpec,
};
pub use precision::{
    coherence_time, fractional_steps, heisenberg_precision, long_time_precision, max_steps,
    qutrit_step_ratio, repetition_limited_precision, step_ratio, steps_required,
    t2_limited_precision, ResourceBudget,
};
