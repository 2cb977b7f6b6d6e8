//! Post-detection SNR statistics for both detection stages.

mod cdf;
mod spectrum;

pub use cdf::{
    beta_density, cdf_min_stage1, cdf_stage1, cdf_stage1_high_snr, cdf_stage2, cdf_stage2_high_snr,
    log_bracket, NoiseUncertainty, SnrLaw, Stage, PROBABILITY_SLACK,
};
pub use spectrum::{characteristic_coefficients, residual_spectrum, ResidualSpectrum, COALESCE_TOLERANCE};
