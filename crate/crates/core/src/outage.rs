//! Outage probabilities under the priority switching rule.
//!
//! Each stream's outage mixes its first- and second-stage CDFs at γ_th,
//! weighted by the probability that the weakest primary stream stays above
//! (or falls below) the switching threshold γ_T.

use serde::{Deserialize, Serialize};

use crate::channel::{LinkPowerProfile, ScenarioConfig, Service};
use crate::error::{Error, Result};
use crate::stats::{cdf_min_stage1, cdf_stage1, cdf_stage2, NoiseUncertainty};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageReport {
    pub per_stream_service1: Vec<f64>,
    pub per_stream_service2: Vec<f64>,
    pub total_service1: f64,
    pub total_service2: f64,
    /// Probability that the groups swap detection order.
    pub switch_probability: f64,
}

/// Probability that the detector swaps the groups. Without secondary streams
/// there is nothing to swap with.
pub fn switch_probability(gamma_t: f64, profile: &LinkPowerProfile, config: &ScenarioConfig) -> Result<f64> {
    if config.m2 == 0 {
        return Ok(0.0);
    }
    cdf_min_stage1(gamma_t, profile, config)
}

/// F(γ_th; first stage) and F(γ_th; own second stage) of one stream.
fn stage_pair(
    gamma_th: f64,
    stream: usize,
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
) -> Result<(f64, f64)> {
    Ok((
        cdf_stage1(gamma_th, stream, profile, config)?,
        cdf_stage2(gamma_th, stream, profile, config, nu)?,
    ))
}

fn global_index(config: &ScenarioConfig, service: Service, k: usize) -> Result<usize> {
    let group = config.group(service);
    if k >= group.len() {
        return Err(Error::domain(format!(
            "stream {k} out of range for {service:?} group of {}",
            group.len()
        )));
    }
    Ok(group.start + k)
}

/// Outage of the `k`-th primary stream (zero-based within the group).
pub fn outage_service1(
    gamma_th: f64,
    gamma_t: f64,
    k: usize,
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
) -> Result<f64> {
    let i = global_index(config, Service::Primary, k)?;
    let w = switch_probability(gamma_t, profile, config)?;
    let (first, second) = stage_pair(gamma_th, i, profile, config, nu)?;
    Ok(first * (1.0 - w) + second * w)
}

/// Outage of the `k`-th secondary stream (zero-based within the group).
pub fn outage_service2(
    gamma_th: f64,
    gamma_t: f64,
    k: usize,
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
) -> Result<f64> {
    let i = global_index(config, Service::Secondary, k)?;
    let w = switch_probability(gamma_t, profile, config)?;
    let (first, second) = stage_pair(gamma_th, i, profile, config, nu)?;
    Ok(second * (1.0 - w) + first * w)
}

/// Probability that at least one stream of `service` is in outage.
pub fn outage_total(
    service: Service,
    gamma_th: f64,
    gamma_t: f64,
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
) -> Result<f64> {
    let size = config.group_size(service);
    if size == 0 {
        return Err(Error::domain(format!("{service:?} group is empty")));
    }
    let per_stream = (0..size)
        .map(|k| match service {
            Service::Primary => outage_service1(gamma_th, gamma_t, k, profile, config, nu),
            Service::Secondary => outage_service2(gamma_th, gamma_t, k, profile, config, nu),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(union_of(&per_stream))
}

fn union_of(per_stream: &[f64]) -> f64 {
    1.0 - per_stream.iter().map(|p| 1.0 - p).product::<f64>()
}

/// Every outage figure at arbitrary thresholds.
pub fn report_at(
    gamma_th: f64,
    gamma_t: f64,
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
) -> Result<OutageReport> {
    let w = switch_probability(gamma_t, profile, config)?;
    let mut s1 = Vec::with_capacity(config.m1);
    for i in config.group(Service::Primary) {
        let (first, second) = stage_pair(gamma_th, i, profile, config, nu)?;
        s1.push(first * (1.0 - w) + second * w);
    }
    let mut s2 = Vec::with_capacity(config.m2);
    for i in config.group(Service::Secondary) {
        let (first, second) = stage_pair(gamma_th, i, profile, config, nu)?;
        s2.push(second * (1.0 - w) + first * w);
    }
    Ok(OutageReport {
        total_service1: union_of(&s1),
        total_service2: union_of(&s2),
        per_stream_service1: s1,
        per_stream_service2: s2,
        switch_probability: w,
    })
}

/// Outage report at the configured thresholds.
pub fn full_report(profile: &LinkPowerProfile, config: &ScenarioConfig, nu: &NoiseUncertainty) -> Result<OutageReport> {
    report_at(config.gamma_th, config.gamma_t, profile, config, nu)
}
