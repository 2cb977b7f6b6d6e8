//! Closed-form CDFs of the post-detection SNR of a zero-forcing stream.
//!
//! For a stream with usable channel power c = a²p̂_i detected jointly with
//! `t` streams on `N` antennas, the SNR is distributed as X / (Y + N₀) where
//! X ~ c·Gamma(N − t + 1, 1) and Y is the sum of `t` independent exponential
//! variables whose means are the residual variances p_j − a²p̂_j of the
//! co-detected streams. Integrating the Erlang CDF of X against the mixture
//! density of Y gives a finite quadruple sum; second-stage detection averages
//! that sum over the log-uniform noise-uncertainty factor β.

use std::f64::consts::LN_10;

use serde::{Deserialize, Serialize};

use super::spectrum::{residual_spectrum, ResidualSpectrum, COALESCE_TOLERANCE};
use crate::channel::{LinkPowerProfile, ScenarioConfig, Service};
use crate::error::{Error, Result};
use crate::numerics::{
    compensated_sum, exp_integral_e1, ln_binomial, ln_factorial, regularized_upper_gamma,
};

/// Probabilities may overshoot [0, 1] by at most this much before it counts
/// as a numerical failure.
pub const PROBABILITY_SLACK: f64 = 1e-9;

/// Detection stage of a stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stage {
    /// Joint zero-forcing over every stream.
    First,
    /// Zero-forcing over the given group after the other group was removed.
    Second(Service),
}

/// Second-stage noise miscalibration: β is uniform in dB on [−L, L] and the
/// effective noise variance is N̂₀/β.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseUncertainty {
    pub l_db: f64,
    pub n_hat0: f64,
}

impl NoiseUncertainty {
    pub fn new(l_db: f64, n_hat0: f64) -> Result<Self> {
        if !(l_db >= 0.0) || !l_db.is_finite() {
            return Err(Error::domain(format!("noise uncertainty {l_db} dB must be >= 0")));
        }
        if !(n_hat0 > 0.0) {
            return Err(Error::domain("nominal noise level must be positive"));
        }
        Ok(Self { l_db, n_hat0 })
    }

    /// Nominal level equal to the thermal noise of the scenario.
    pub fn from_config(config: &ScenarioConfig) -> Result<Self> {
        Self::new(config.noise_uncertainty_db, config.noise_power)
    }

    /// Upper end 10^{L/10} of the support of β (the lower end is its inverse).
    pub fn beta_max(&self) -> f64 {
        10f64.powf(self.l_db / 10.0)
    }

    pub fn beta_min(&self) -> f64 {
        10f64.powf(-self.l_db / 10.0)
    }
}

/// Density of β for an uncertainty bound of `l_db` dB.
pub fn beta_density(x: f64, l_db: f64) -> f64 {
    if !(l_db > 0.0) {
        return 0.0;
    }
    let lo = 10f64.powf(-l_db / 10.0);
    let hi = 10f64.powf(l_db / 10.0);
    if x > lo && x < hi {
        5.0 / (LN_10 * l_db * x)
    } else {
        0.0
    }
}

/// Distribution of one stream's post-detection SNR.
#[derive(Debug, Clone, PartialEq)]
pub struct SnrLaw {
    /// a²p̂_i.
    signal: f64,
    /// N − t.
    excess_dof: usize,
    /// None when every co-detected stream has perfect CSI.
    interference: Option<ResidualSpectrum>,
}

impl SnrLaw {
    /// Law for `signal` = a²p̂_i, `n_rx` antennas and the residual variances of
    /// all streams detected in the same stage (including the stream itself).
    pub fn from_parts(signal: f64, n_rx: usize, co_residuals: &[f64]) -> Result<Self> {
        if !(signal > 0.0) || !signal.is_finite() {
            return Err(Error::domain(format!("signal power {signal} must be positive")));
        }
        let t = co_residuals.len();
        if t == 0 {
            return Err(Error::domain("at least one co-detected stream is required"));
        }
        if n_rx < t {
            return Err(Error::InsufficientAntennas { needed: t, available: n_rx });
        }
        let interference = match residual_spectrum(co_residuals, COALESCE_TOLERANCE) {
            Ok(s) => Some(s),
            Err(Error::DegenerateSpectrum) => None,
            Err(e) => return Err(e),
        };
        Ok(Self { signal, excess_dof: n_rx - t, interference })
    }

    /// Law of stream `stream` (global index) when detected in `stage`.
    pub fn for_stream(
        profile: &LinkPowerProfile,
        config: &ScenarioConfig,
        stream: usize,
        stage: Stage,
    ) -> Result<Self> {
        let m = config.total_streams();
        if stream >= m || profile.len() != m {
            return Err(Error::domain(format!("stream {stream} out of range for {m} streams")));
        }
        let members = match stage {
            Stage::First => 0..m,
            Stage::Second(service) => {
                let g = config.group(service);
                if !g.contains(&stream) {
                    return Err(Error::domain(format!(
                        "stream {stream} is not part of the {service:?} group"
                    )));
                }
                g
            }
        };
        Self::from_parts(profile.signal_power(stream), config.n_rx, profile.residuals_of(members))
    }

    pub fn spectrum(&self) -> Option<&ResidualSpectrum> {
        self.interference.as_ref()
    }

    pub fn excess_dof(&self) -> usize {
        self.excess_dof
    }

    /// CDF at `gamma` with a known noise variance.
    pub fn cdf(&self, gamma: f64, noise: f64) -> Result<f64> {
        self.fixed_noise(gamma, noise, true)
    }

    /// CDF with the exponential factor exp(−N₀γ/c) replaced by one.
    ///
    /// This is an approximation and is returned unclamped: near γ = 0 it
    /// dips slightly below zero by O(N₀γ/c).
    pub fn cdf_high_snr(&self, gamma: f64, noise: f64) -> Result<f64> {
        if self.interference.is_none() {
            return Err(Error::DegenerateSpectrum);
        }
        check_gamma(gamma)?;
        if gamma == 0.0 {
            return Ok(0.0);
        }
        Ok(1.0 - self.fixed_noise_tail(gamma, noise, false))
    }

    /// CDF averaged over the noise-uncertainty factor.
    pub fn cdf_uncertain(&self, gamma: f64, nu: &NoiseUncertainty) -> Result<f64> {
        check_gamma(gamma)?;
        if nu.l_db == 0.0 {
            return self.cdf(gamma, nu.n_hat0);
        }
        if gamma == 0.0 {
            return Ok(0.0);
        }
        let c = self.signal;
        let x = nu.n_hat0 * gamma / c;
        let b = nu.beta_max();
        let (lo, hi) = (x / b, x * b);
        let norm = 5.0 / (nu.l_db * LN_10);

        let tail = match &self.interference {
            None => {
                let mut terms = Vec::with_capacity(self.excess_dof + 1);
                terms.push(exp_integral_e1(lo)? - exp_integral_e1(hi)?);
                for k in 1..=self.excess_dof as u32 {
                    terms.push(gamma_q_difference(k, lo, hi) / k as f64);
                }
                norm * compensated_sum(terms)
            }
            Some(spec) => {
                let mut terms = Vec::new();
                let e1_diff = exp_integral_e1(lo)? - exp_integral_e1(hi)?;
                for k in 0..=self.excess_dof as u32 {
                    for (v, &lam) in spec.distinct.iter().enumerate() {
                        let rate = gamma / c + 1.0 / lam;
                        for j in 1..=spec.multiplicity[v] as u32 {
                            let xc = spec.coefficient(v, j as usize);
                            if xc == 0.0 {
                                continue;
                            }
                            for l in 0..=k {
                                let n = k - l;
                                let bracket = if n == 0 {
                                    e1_diff
                                } else {
                                    gamma_q_difference(n, lo, hi)
                                };
                                if bracket == 0.0 {
                                    continue;
                                }
                                let log_mag = ln_binomial(k, l) + xc.abs().ln() + ln_factorial(j + l - 1)
                                    - ln_factorial(k)
                                    - ln_factorial(j - 1)
                                    - j as f64 * lam.ln()
                                    - l as f64 * c.ln()
                                    + pow_log(gamma, l)
                                    - (j + l) as f64 * rate.ln()
                                    + if n > 0 { ln_factorial(n - 1) } else { 0.0 };
                                terms.push(xc.signum() * log_mag.exp() * bracket);
                            }
                        }
                    }
                }
                norm * compensated_sum(terms)
            }
        };
        finish(1.0 - tail)
    }

    /// High-SNR form of [`Self::cdf_uncertain`]: only the k = l terms
    /// survive, with Γ(0, ·) replaced by its logarithmic small-argument
    /// behaviour. Returned unclamped.
    pub fn cdf_uncertain_high_snr(&self, gamma: f64, nu: &NoiseUncertainty) -> Result<f64> {
        let spec = self.interference.as_ref().ok_or(Error::DegenerateSpectrum)?;
        check_gamma(gamma)?;
        if gamma == 0.0 {
            return Ok(0.0);
        }
        let c = self.signal;
        let factor = if nu.l_db > 0.0 {
            5.0 * log_bracket(gamma, c, nu) / (nu.l_db * LN_10)
        } else {
            1.0
        };
        let mut terms = Vec::new();
        for k in 0..=self.excess_dof as u32 {
            for (v, &lam) in spec.distinct.iter().enumerate() {
                let rate = gamma / c + 1.0 / lam;
                for j in 1..=spec.multiplicity[v] as u32 {
                    let xc = spec.coefficient(v, j as usize);
                    if xc == 0.0 {
                        continue;
                    }
                    let log_mag = xc.abs().ln() + ln_factorial(j + k - 1)
                        - ln_factorial(k)
                        - k as f64 * c.ln()
                        - ln_factorial(j - 1)
                        - j as f64 * lam.ln()
                        + pow_log(gamma, k)
                        - (j + k) as f64 * rate.ln();
                    terms.push(xc.signum() * log_mag.exp());
                }
            }
        }
        Ok(1.0 - factor * compensated_sum(terms))
    }

    fn fixed_noise(&self, gamma: f64, noise: f64, with_exp: bool) -> Result<f64> {
        check_gamma(gamma)?;
        if !(noise >= 0.0) {
            return Err(Error::domain(format!("noise variance {noise} must be nonnegative")));
        }
        if gamma == 0.0 {
            return Ok(0.0);
        }
        if self.interference.is_none() {
            // X / N₀ alone: Erlang CDF P(N − t + 1, N₀γ/c).
            if noise == 0.0 {
                return Ok(0.0);
            }
            let x = noise * gamma / self.signal;
            return finish(regularized_lower_gamma(self.excess_dof as u32 + 1, x));
        }
        finish(1.0 - self.fixed_noise_tail(gamma, noise, with_exp))
    }

    /// Σ over (k, v, j, l) of the complementary-CDF terms.
    fn fixed_noise_tail(&self, gamma: f64, noise: f64, with_exp: bool) -> f64 {
        let spec = self.interference.as_ref().expect("interference-limited law");
        let c = self.signal;
        let damping = if with_exp { -noise * gamma / c } else { 0.0 };
        let mut terms = Vec::new();
        for k in 0..=self.excess_dof as u32 {
            for (v, &lam) in spec.distinct.iter().enumerate() {
                let rate = gamma / c + 1.0 / lam;
                for j in 1..=spec.multiplicity[v] as u32 {
                    let xc = spec.coefficient(v, j as usize);
                    if xc == 0.0 {
                        continue;
                    }
                    for l in 0..=k {
                        if noise == 0.0 && l < k {
                            continue;
                        }
                        let log_mag = ln_binomial(k, l) + xc.abs().ln() + ln_factorial(j + l - 1)
                            - ln_factorial(k)
                            - k as f64 * c.ln()
                            - ln_factorial(j - 1)
                            - j as f64 * lam.ln()
                            + pow_log(noise, k - l)
                            + pow_log(gamma, k)
                            + damping
                            - (j + l) as f64 * rate.ln();
                        terms.push(xc.signum() * log_mag.exp());
                    }
                }
            }
        }
        compensated_sum(terms)
    }
}

/// ln(N̂₀γ/(c·10^{−L/10})) − ln(N̂₀γ/(c·10^{L/10})), evaluated literally.
pub fn log_bracket(gamma: f64, signal: f64, nu: &NoiseUncertainty) -> f64 {
    let x = nu.n_hat0 * gamma / signal;
    (x / nu.beta_min()).ln() - (x / nu.beta_max()).ln()
}

/// k·ln(x), with the convention 0·ln(0) = 0.
fn pow_log(x: f64, k: u32) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * x.ln()
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma >= 0.0) {
        return Err(Error::domain(format!("SNR threshold {gamma} must be nonnegative")));
    }
    Ok(())
}

fn finish(p: f64) -> Result<f64> {
    if !p.is_finite() || p < -PROBABILITY_SLACK || p > 1.0 + PROBABILITY_SLACK {
        return Err(Error::Instability(format!("probability {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// P(n, x) = 1 − Q(n, x), by series where that avoids cancellation.
fn regularized_lower_gamma(n: u32, x: f64) -> f64 {
    if x < n as f64 + 1.0 {
        // e^{-x} Σ_{m ≥ n} x^m/m!
        let mut term = (n as f64 * x.ln() - x - ln_factorial(n)).exp();
        let mut sum = term;
        let mut m = n;
        while term > 1e-17 * sum {
            m += 1;
            term *= x / m as f64;
            sum += term;
        }
        sum
    } else {
        1.0 - regularized_upper_gamma(n, x)
    }
}

/// Q(n, lo) − Q(n, hi) for lo ≤ hi.
fn gamma_q_difference(n: u32, lo: f64, hi: f64) -> f64 {
    if hi < n as f64 + 1.0 {
        regularized_lower_gamma(n, hi) - regularized_lower_gamma(n, lo)
    } else {
        regularized_upper_gamma(n, lo) - regularized_upper_gamma(n, hi)
    }
}

fn stage_law(
    stream: usize,
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    stage: Stage,
) -> Result<SnrLaw> {
    SnrLaw::for_stream(profile, config, stream, stage)
}

/// Second stage of the stream's own service group.
fn own_second_stage(config: &ScenarioConfig, stream: usize) -> Result<Stage> {
    config
        .service_of(stream)
        .map(Stage::Second)
        .ok_or_else(|| Error::domain(format!("stream {stream} out of range")))
}

/// First-stage CDF of `stream` (all M streams detected jointly).
pub fn cdf_stage1(gamma: f64, stream: usize, profile: &LinkPowerProfile, config: &ScenarioConfig) -> Result<f64> {
    stage_law(stream, profile, config, Stage::First)?.cdf(gamma, config.noise_power)
}

/// Second-stage CDF of `stream`, detected with the rest of its own group.
pub fn cdf_stage2(
    gamma: f64,
    stream: usize,
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
) -> Result<f64> {
    let stage = own_second_stage(config, stream)?;
    stage_law(stream, profile, config, stage)?.cdf_uncertain(gamma, nu)
}

pub fn cdf_stage1_high_snr(
    gamma: f64,
    stream: usize,
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
) -> Result<f64> {
    stage_law(stream, profile, config, Stage::First)?.cdf_high_snr(gamma, config.noise_power)
}

pub fn cdf_stage2_high_snr(
    gamma: f64,
    stream: usize,
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
) -> Result<f64> {
    let stage = own_second_stage(config, stream)?;
    stage_law(stream, profile, config, stage)?.cdf_uncertain_high_snr(gamma, nu)
}

/// CDF of the smallest first-stage SNR among primary streams, treating the
/// streams as independent.
pub fn cdf_min_stage1(gamma_t: f64, profile: &LinkPowerProfile, config: &ScenarioConfig) -> Result<f64> {
    check_gamma(gamma_t)?;
    let mut survive = 1.0;
    for i in config.group(Service::Primary) {
        survive *= 1.0 - cdf_stage1(gamma_t, i, profile, config)?;
    }
    finish(1.0 - survive)
}
