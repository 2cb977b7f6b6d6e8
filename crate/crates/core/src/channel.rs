//! Link budget, MMSE estimation quality, channel aging and per-frame channel
//! realizations.

use std::f64::consts::PI;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{bessel_j0, sample_complex_gaussian, ComplexMatrix, RngStream};

/// The two priority groups sharing the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Service {
    /// High-priority (licensed) streams.
    Primary,
    /// Low-priority (cognitive) streams.
    Secondary,
}

impl Service {
    pub fn other(self) -> Self {
        match self {
            Service::Primary => Service::Secondary,
            Service::Secondary => Service::Primary,
        }
    }
}

/// Complete description of one experiment, in linear units.
///
/// Streams are indexed globally from zero with the `m1` primary streams first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub n_rx: usize,
    pub m1: usize,
    pub m2: usize,
    pub tx_power: f64,
    pub noise_power: f64,
    /// Normalized distances (1 km reference), one per stream.
    pub distances: Vec<f64>,
    pub pathloss_exponents: Vec<f64>,
    /// Gauss–Markov aging coefficient.
    pub alpha: f64,
    pub noise_uncertainty_db: f64,
    pub gamma_th: f64,
    pub gamma_t: f64,
    pub trials: usize,
    pub seed: u64,
    /// Treat channel estimates as exact in power (p_hat = p), as in the
    /// large-array regime.
    pub massive_limit: bool,
}

impl ScenarioConfig {
    /// Configuration with the macro-cell defaults: path-loss exponent 4,
    /// 2 dB noise uncertainty, unit thresholds, 10 dB transmit SNR.
    pub fn new(n_rx: usize, m1: usize, m2: usize, distances: Vec<f64>) -> Self {
        let m = m1 + m2;
        Self {
            n_rx,
            m1,
            m2,
            tx_power: 10.0,
            noise_power: 1.0,
            distances,
            pathloss_exponents: vec![4.0; m],
            alpha: 1.0,
            noise_uncertainty_db: 2.0,
            gamma_th: 1.0,
            gamma_t: 1.0,
            trials: 100_000,
            seed: 0,
            massive_limit: false,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_tx_snr_db(mut self, db: f64) -> Self {
        self.tx_power = self.noise_power * crate::numerics::db_to_linear(db);
        self
    }

    pub fn with_noise_uncertainty_db(mut self, l_db: f64) -> Self {
        self.noise_uncertainty_db = l_db;
        self
    }

    pub fn with_thresholds(mut self, gamma_th: f64, gamma_t: f64) -> Self {
        self.gamma_th = gamma_th;
        self.gamma_t = gamma_t;
        self
    }

    pub fn with_trials(mut self, trials: usize, seed: u64) -> Self {
        self.trials = trials;
        self.seed = seed;
        self
    }

    pub fn with_massive_limit(mut self, on: bool) -> Self {
        self.massive_limit = on;
        self
    }

    pub fn total_streams(&self) -> usize {
        self.m1 + self.m2
    }

    /// Global stream indices of a service group.
    pub fn group(&self, service: Service) -> Range<usize> {
        match service {
            Service::Primary => 0..self.m1,
            Service::Secondary => self.m1..self.m1 + self.m2,
        }
    }

    pub fn group_size(&self, service: Service) -> usize {
        self.group(service).len()
    }

    pub fn service_of(&self, stream: usize) -> Option<Service> {
        if stream < self.m1 {
            Some(Service::Primary)
        } else if stream < self.total_streams() {
            Some(Service::Secondary)
        } else {
            None
        }
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.total_streams();
        if m == 0 {
            return Err(Error::config("at least one stream is required"));
        }
        if self.n_rx < m {
            return Err(Error::config(format!(
                "n_rx = {} is smaller than m1 + m2 = {m}",
                self.n_rx
            )));
        }
        if self.distances.len() != m {
            return Err(Error::config(format!(
                "{} distances given for {m} streams",
                self.distances.len()
            )));
        }
        if self.pathloss_exponents.len() != m {
            return Err(Error::config(format!(
                "{} path-loss exponents given for {m} streams",
                self.pathloss_exponents.len()
            )));
        }
        if let Some(d) = self.distances.iter().find(|d| !(**d > 0.0) || !d.is_finite()) {
            return Err(Error::config(format!("distance {d} must be positive")));
        }
        if let Some(w) = self.pathloss_exponents.iter().find(|w| !(2.0..=6.0).contains(*w)) {
            return Err(Error::config(format!("path-loss exponent {w} outside [2, 6]")));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::config(format!("aging coefficient {} outside (0, 1]", self.alpha)));
        }
        if !(self.noise_uncertainty_db >= 0.0) || !self.noise_uncertainty_db.is_finite() {
            return Err(Error::config("noise uncertainty must be a finite value >= 0 dB"));
        }
        if !(self.tx_power > 0.0) || !(self.noise_power > 0.0) {
            return Err(Error::config("transmit and noise power must be positive"));
        }
        if !(self.gamma_th > 0.0) || !(self.gamma_t > 0.0) {
            return Err(Error::config("thresholds must be positive"));
        }
        if self.trials == 0 {
            return Err(Error::config("trial budget must be at least 1"));
        }
        Ok(())
    }
}

/// Per-stream received powers and estimation quality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkPowerProfile {
    pub p: Vec<f64>,
    pub p_hat: Vec<f64>,
    pub residual: Vec<f64>,
    pub alpha: f64,
}

impl LinkPowerProfile {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Variance a² p̂_i of the usable (estimated and aged) channel of a stream.
    pub fn signal_power(&self, stream: usize) -> f64 {
        self.alpha * self.alpha * self.p_hat[stream]
    }

    pub fn residuals_of(&self, streams: Range<usize>) -> &[f64] {
        &self.residual[streams]
    }
}

/// Estimated channel and estimation-plus-aging error for one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Ĥ P̂^{1/2}, N × M.
    pub estimated: ComplexMatrix,
    /// E, N × M.
    pub error: ComplexMatrix,
}

/// Received power p_T d^{-ω}.
pub fn link_power(tx_power: f64, distance: f64, omega: f64) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::domain(format!("distance {distance} must be positive")));
    }
    if !(tx_power > 0.0) {
        return Err(Error::domain(format!("transmit power {tx_power} must be positive")));
    }
    if !(2.0..=6.0).contains(&omega) {
        return Err(Error::domain(format!("path-loss exponent {omega} outside [2, 6]")));
    }
    Ok(tx_power * distance.powf(-omega))
}

/// Power of the MMSE channel estimate, p² / (p + 1/(M p_T)).
pub fn mmse_power(p: f64, m_total: usize, tx_power: f64) -> Result<f64> {
    if !(p > 0.0) || m_total == 0 || !(tx_power > 0.0) {
        return Err(Error::domain("mmse_power needs p > 0, m_total >= 1, p_T > 0"));
    }
    Ok(p * p / (p + 1.0 / (m_total as f64 * tx_power)))
}

/// Aging coefficient J₀(2π f_D T_s).
pub fn aging_coefficient(fd_ts: f64) -> Result<f64> {
    if !(fd_ts >= 0.0) {
        return Err(Error::domain(format!("normalized Doppler {fd_ts} must be nonnegative")));
    }
    bessel_j0(2.0 * PI * fd_ts)
}

/// Residual error variance p − a^{2·order} p̂ after `order` aging steps.
pub fn residual_variance(p: f64, p_hat: f64, a: f64, order: u32) -> Result<f64> {
    if order == 0 {
        return Err(Error::domain("aging order must be at least 1"));
    }
    if !(p_hat > 0.0) || p_hat > p * (1.0 + 1e-12) {
        return Err(Error::domain(format!("need 0 < p_hat <= p, got p = {p}, p_hat = {p_hat}")));
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain(format!("aging coefficient {a} outside (0, 1]")));
    }
    let r = p - a.powi(2 * order as i32) * p_hat;
    if r < -1e-12 * p {
        return Err(Error::Instability(format!("negative residual variance {r}")));
    }
    Ok(r.max(0.0))
}

/// Applies the link budget, MMSE estimation and first-order aging to every
/// stream. In massive-limit mode the estimate power equals the true power.
pub fn build_profile(config: &ScenarioConfig) -> Result<LinkPowerProfile> {
    config.validate()?;
    let m = config.total_streams();
    let mut p = Vec::with_capacity(m);
    let mut p_hat = Vec::with_capacity(m);
    let mut residual = Vec::with_capacity(m);
    for (d, w) in config.distances.iter().zip(&config.pathloss_exponents) {
        let pi = link_power(config.tx_power, *d, *w)?;
        let hat = if config.massive_limit { pi } else { mmse_power(pi, m, config.tx_power)? };
        residual.push(residual_variance(pi, hat, config.alpha, 1)?);
        p.push(pi);
        p_hat.push(hat);
    }
    Ok(LinkPowerProfile { p, p_hat, residual, alpha: config.alpha })
}

/// Draws the estimated channel and its error for one frame.
pub fn realize_channel(
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    rng: &mut RngStream,
) -> Result<ChannelRealization> {
    let m = config.total_streams();
    if profile.len() != m {
        return Err(Error::domain("profile does not match configuration"));
    }
    let signal: Vec<f64> = (0..m).map(|j| profile.signal_power(j)).collect();
    let estimated = sample_complex_gaussian(config.n_rx, m, &signal, rng)?;
    let error = sample_complex_gaussian(config.n_rx, m, &profile.residual, rng)?;
    Ok(ChannelRealization { estimated, error })
}
