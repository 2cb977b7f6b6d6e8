//! Special functions, complex matrix kernels and random sampling.

mod matrix;
mod rng;
mod special;
mod sum;

pub use matrix::{pseudo_inverse, ComplexMatrix, C64, RANK_TOLERANCE};
pub use rng::{sample_complex_gaussian, RngStream};
pub use special::{
    bessel_j0, exp_integral_e1, factorial, ln_binomial, ln_factorial, regularized_upper_gamma,
    upper_incomplete_gamma, EULER_GAMMA,
};
pub use sum::compensated_sum;

/// Decibels to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
