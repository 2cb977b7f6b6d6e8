//! Large-array planning: deterministic SNR equivalents, secondary admission
//! and coherence time.
//!
//! Throughout, `s = a²p̂` is the usable signal power and `r = p − a²p̂` the
//! residual error power of an i.i.d. link.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::channel::{mmse_power, LinkPowerProfile, ScenarioConfig, Service};
use crate::error::{Error, Result};

/// Deterministic SNR equivalent of a stream as the array grows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AsymptoticSnr {
    Finite(f64),
    /// The residual error vanishes, so the SNR grows without bound.
    Unbounded,
}

impl AsymptoticSnr {
    pub fn value(self) -> f64 {
        match self {
            AsymptoticSnr::Finite(v) => v,
            AsymptoticSnr::Unbounded => f64::INFINITY,
        }
    }
}

fn asymptotic_snr(
    stream: usize,
    co_streams: std::ops::Range<usize>,
    profile: &LinkPowerProfile,
    n_rx: usize,
) -> Result<AsymptoticSnr> {
    let t = co_streams.len();
    if n_rx < t {
        return Err(Error::InsufficientAntennas { needed: t, available: n_rx });
    }
    if n_rx == t {
        return Ok(AsymptoticSnr::Finite(0.0));
    }
    let residual: f64 = profile.residuals_of(co_streams).iter().sum();
    if residual <= 0.0 {
        return Ok(AsymptoticSnr::Unbounded);
    }
    Ok(AsymptoticSnr::Finite((n_rx - t) as f64 * profile.signal_power(stream) / residual))
}

fn check_stream(stream: usize, config: &ScenarioConfig, profile: &LinkPowerProfile) -> Result<()> {
    if stream >= config.total_streams() || profile.len() != config.total_streams() {
        return Err(Error::domain(format!("stream {stream} out of range")));
    }
    Ok(())
}

/// (N − M) a²p̂_i / Σ_{j ≤ M} (p_j − a²p̂_j): all M streams interfere.
pub fn asymptotic_snr_stage1(stream: usize, profile: &LinkPowerProfile, config: &ScenarioConfig) -> Result<AsymptoticSnr> {
    check_stream(stream, config, profile)?;
    asymptotic_snr(stream, 0..config.total_streams(), profile, config.n_rx)
}

/// Same as the first stage but restricted to the stream's own group.
pub fn asymptotic_snr_stage2(stream: usize, profile: &LinkPowerProfile, config: &ScenarioConfig) -> Result<AsymptoticSnr> {
    check_stream(stream, config, profile)?;
    let service = config.service_of(stream).unwrap_or(Service::Primary);
    asymptotic_snr(stream, config.group(service), profile, config.n_rx)
}

/// i.i.d. link parameters (a, p, p̂) with `s` and `r` precomputed.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Link {
    s: f64,
    r: f64,
}

impl Link {
    fn new(a: f64, p: f64, p_hat: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) || !(p > 0.0) || !(p_hat > 0.0) || p_hat > p * (1.0 + 1e-12) {
            return Err(Error::domain(format!("invalid link parameters a = {a}, p = {p}, p_hat = {p_hat}")));
        }
        let s = a * a * p_hat;
        let r = p - s;
        if r <= 0.0 {
            return Err(Error::PerfectCsi);
        }
        Ok(Self { s, r })
    }

    /// Per-stream SNR increment (n/m − 1) s/r.
    fn snr(&self, m2: f64, n: f64) -> f64 {
        (n / m2 - 1.0) * self.s / self.r
    }

    /// s (n − m) + m r.
    fn mix(&self, m2: f64, n: f64) -> f64 {
        self.s * (n - m2) + m2 * self.r
    }
}

fn check_counts(m2: usize, n: usize) -> Result<()> {
    if m2 == 0 || m2 > n {
        return Err(Error::domain(format!("need 0 < m2 <= n, got m2 = {m2}, n = {n}")));
    }
    Ok(())
}

/// Left side minus right side of the admission condition
/// ln(1 + (n/m − 1)s/r)·(s(n − m) + m r) − s n.
fn condition_margin(link: &Link, m2: f64, n: f64) -> f64 {
    link.snr(m2, n).ln_1p() * link.mix(m2, n) - link.s * n
}

/// KKT admission test for `m2` secondary streams on `n` antennas.
///
/// Independent of M₁ and γ_th; with p̂ = p it depends on a only.
pub fn optimality_condition(m2: usize, n: usize, a: f64, p: f64, p_hat: f64) -> Result<bool> {
    check_counts(m2, n)?;
    let link = Link::new(a, p, p_hat)?;
    Ok(condition_margin(&link, m2 as f64, n as f64) >= 0.0)
}

/// Secondary sum rate m₂ log₂(1 + (n/m₂ − 1)s/r); `m2` may be fractional.
pub fn sum_rate_objective(m2: f64, n: usize, a: f64, p: f64, p_hat: f64) -> Result<f64> {
    if !(m2 > 0.0) || m2 > n as f64 {
        return Err(Error::domain(format!("need 0 < m2 <= n, got m2 = {m2}")));
    }
    let link = Link::new(a, p, p_hat)?;
    Ok(m2 * link.snr(m2, n as f64).ln_1p() / LN_2)
}

/// Primary SNR constraint γ_th / SNR₁ − 1 ≤ 0 with
/// SNR₁ = (n − m₁ − m₂) s / ((m₁ + m₂) r); `m2` may be fractional.
pub fn constraint_value(m2: f64, n: usize, m1: usize, a: f64, p: f64, p_hat: f64, gamma_th: f64) -> Result<f64> {
    if !(m2 >= 0.0) || m2 + m1 as f64 > n as f64 {
        return Err(Error::domain(format!("need 0 <= m2 <= n - m1, got m2 = {m2}")));
    }
    let link = Link::new(a, p, p_hat)?;
    let total = m1 as f64 + m2;
    let snr1 = (n as f64 - total) * link.s / (total * link.r);
    Ok(gamma_th / snr1 - 1.0)
}

/// Lagrange multiplier of the admission problem at `m2`.
pub fn lagrange_multiplier(m2: usize, n: usize, m1: usize, a: f64, p: f64, p_hat: f64, gamma_th: f64) -> Result<f64> {
    check_counts(m2, n)?;
    if m1 + m2 > n {
        return Err(Error::domain("m1 + m2 exceeds n"));
    }
    if !(gamma_th > 0.0) {
        return Err(Error::domain("gamma_th must be positive"));
    }
    let link = Link::new(a, p, p_hat)?;
    let (m, nf) = (m2 as f64, n as f64);
    let d = (n - m1 - m2) as f64;
    let mix = link.mix(m, nf);
    Ok(link.s * d * d / (LN_2 * gamma_th * link.r * mix) * condition_margin(&link, m, nf))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlannerResult {
    pub m2_star: usize,
    /// Multiplier at M₂*; absent when no secondary stream is admitted.
    pub lambda_diag: Option<f64>,
    /// Sum rate at M₂* (zero when none is admitted).
    pub objective: f64,
    /// Primary constraint value at M₂*, reported but not enforced.
    pub constraint: Option<f64>,
    /// Number of candidates tested.
    pub iterations: usize,
}

/// Descending scan from M₂ = n − m₁ to 1 for the first candidate that
/// satisfies the admission condition. `p_hat_of(m2)` supplies the estimate
/// power for each candidate.
pub fn scan_m2(
    n: usize,
    m1: usize,
    a: f64,
    p: f64,
    p_hat_of: impl Fn(usize) -> Result<f64>,
    gamma_th: f64,
) -> Result<PlannerResult> {
    let mut iterations = 0;
    for m2 in (1..=n.saturating_sub(m1)).rev() {
        iterations += 1;
        let p_hat = p_hat_of(m2)?;
        if optimality_condition(m2, n, a, p, p_hat)? {
            return Ok(PlannerResult {
                m2_star: m2,
                lambda_diag: Some(lagrange_multiplier(m2, n, m1, a, p, p_hat, gamma_th)?),
                objective: sum_rate_objective(m2 as f64, n, a, p, p_hat)?,
                constraint: Some(constraint_value(m2 as f64, n, m1, a, p, p_hat, gamma_th)?),
                iterations,
            });
        }
    }
    Ok(PlannerResult { m2_star: 0, lambda_diag: None, objective: 0.0, constraint: None, iterations })
}

/// Optimal secondary admission for a scenario. The common link power is
/// that of the first secondary stream (or the last stream when there is
/// none). Massive-limit mode uses p̂ = p; otherwise p̂ is the MMSE estimate
/// power for M₁ + M₂ streams at each candidate.
pub fn optimal_m2(config: &ScenarioConfig, profile: &LinkPowerProfile) -> Result<PlannerResult> {
    if profile.is_empty() {
        return Err(Error::domain("empty power profile"));
    }
    let idx = if config.m2 > 0 { config.m1 } else { profile.len() - 1 };
    let p = profile.p[idx];
    let (m1, tx) = (config.m1, config.tx_power);
    if config.massive_limit {
        scan_m2(config.n_rx, m1, config.alpha, p, |_| Ok(p), config.gamma_th)
    } else {
        scan_m2(config.n_rx, m1, config.alpha, p, |m2| mmse_power(p, m1 + m2, tx), config.gamma_th)
    }
}

/// Second differences of the objective and constraint at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvaturePoint {
    pub m2: usize,
    pub objective_second_diff: f64,
    pub constraint_second_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexityReport {
    pub points: Vec<CurvaturePoint>,
    /// Every objective second difference is negative.
    pub objective_concave: bool,
    /// Every constraint second difference is positive.
    pub constraint_convex: bool,
}

/// Half-step for the central differences; keeps M₂ ± h inside (0, n − m₁)
/// for every integer grid point in [1, n − m₁ − 1].
pub const CURVATURE_STEP: f64 = 0.5;

/// Central second differences of the sum-rate objective and the primary
/// constraint at each `m2` in `grid`.
pub fn convexity_certificate(
    n: usize,
    m1: usize,
    a: f64,
    p: f64,
    p_hat: f64,
    gamma_th: f64,
    grid: &[usize],
) -> Result<ConvexityReport> {
    let h = CURVATURE_STEP;
    let mut points = Vec::with_capacity(grid.len());
    for &m2 in grid {
        if m2 == 0 || m2 + m1 >= n {
            return Err(Error::domain(format!("grid point {m2} outside (0, n - m1)")));
        }
        let x = m2 as f64;
        let f = |v: f64| sum_rate_objective(v, n, a, p, p_hat);
        let g = |v: f64| constraint_value(v, n, m1, a, p, p_hat, gamma_th);
        points.push(CurvaturePoint {
            m2,
            objective_second_diff: (f(x + h)? - 2.0 * f(x)? + f(x - h)?) / (h * h),
            constraint_second_diff: (g(x + h)? - 2.0 * g(x)? + g(x - h)?) / (h * h),
        });
    }
    Ok(ConvexityReport {
        objective_concave: points.iter().all(|q| q.objective_second_diff < 0.0),
        constraint_convex: points.iter().all(|q| q.constraint_second_diff > 0.0),
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoherenceStatus {
    Finite,
    /// No aging (a = 1): the constraint never binds.
    Unlimited,
    /// The constraint fails even at T = 0.
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherenceResult {
    /// Largest symbol count keeping the weakest primary SNR at γ_th;
    /// `u64::MAX` when unlimited.
    pub t_max: u64,
    /// Large-array minimum primary SNR after `t_max` symbols.
    pub snr_at_tmax: f64,
    /// Unfloored solution.
    pub pre_floor: f64,
    pub status: CoherenceStatus,
}

/// Solves (N − M) a^{2T} p̂_min / ((1 − a^{2T}) Σ p̂) = γ_th for T.
fn solve_coherence(n: usize, m: usize, a: f64, gamma_th: f64, p_hat_sum: f64, p_hat_min: f64) -> Result<CoherenceResult> {
    if n < m {
        return Err(Error::InsufficientAntennas { needed: m, available: n });
    }
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::domain(format!("aging coefficient {a} outside (0, 1]")));
    }
    if !(gamma_th > 0.0) || !gamma_th.is_finite() {
        return Err(Error::domain("gamma_th must be positive and finite"));
    }
    let dof = (n - m) as f64;
    let snr_after = |t: f64| {
        let decay = a.powf(2.0 * t);
        dof * decay * p_hat_min / ((1.0 - decay) * p_hat_sum)
    };
    if a == 1.0 {
        return Ok(CoherenceResult {
            t_max: u64::MAX,
            snr_at_tmax: f64::INFINITY,
            pre_floor: f64::INFINITY,
            status: CoherenceStatus::Unlimited,
        });
    }
    let ratio = gamma_th * p_hat_sum / (gamma_th * p_hat_sum + p_hat_min * dof);
    let pre_floor = ratio.ln() / (2.0 * a.ln());
    if pre_floor < 0.0 {
        return Ok(CoherenceResult { t_max: 0, snr_at_tmax: snr_after(0.0), pre_floor, status: CoherenceStatus::Infeasible });
    }
    let t_max = pre_floor.floor() as u64;
    Ok(CoherenceResult {
        t_max,
        snr_at_tmax: snr_after(t_max as f64),
        pre_floor,
        status: CoherenceStatus::Finite,
    })
}

/// Coherence time of a scenario from its estimate powers.
pub fn coherence_time(profile: &LinkPowerProfile, config: &ScenarioConfig, gamma_th: f64) -> Result<CoherenceResult> {
    let m = config.total_streams();
    if profile.len() != m || m == 0 {
        return Err(Error::domain("profile does not match configuration"));
    }
    let sum: f64 = profile.p_hat.iter().sum();
    let min = profile.p_hat.iter().copied().fold(f64::INFINITY, f64::min);
    solve_coherence(config.n_rx, m, config.alpha, gamma_th, sum, min)
}

/// Coherence time with identical links:
/// floor(ln(Mγ / (N − M + Mγ)) / (2 ln a)).
pub fn coherence_time_iid(m: usize, n: usize, a: f64, gamma_th: f64) -> Result<CoherenceResult> {
    if m == 0 {
        return Err(Error::domain("at least one stream is required"));
    }
    solve_coherence(n, m, a, gamma_th, m as f64, 1.0)
}
