//! Frame-level simulation of the two-stage zero-forcing detector.
//!
//! Every trial draws one channel pair (estimate, error), computes the
//! first-stage SNR of all streams through the full pseudo-inverse and the
//! second-stage SNR of each group through the pseudo-inverse of its own
//! columns, with the second-stage noise scaled by a per-frame draw of β.
//! Which of those numbers a stream actually experiences is decided by the
//! switching rule on the primary group's first-stage SNRs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{realize_channel, LinkPowerProfile, ScenarioConfig, Service};
use crate::error::{Error, Result};
use crate::numerics::{pseudo_inverse, ComplexMatrix, RngStream};
use crate::outage::OutageReport;
use crate::stats::NoiseUncertainty;

/// First substream index used for redrawing rank-deficient trials.
const REDRAW_BASE: u64 = 1 << 62;
const MAX_REDRAWS: u64 = 16;

/// Detector outcome of one frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// SNRs of the group detected first.
    pub snr_first_stage: Vec<f64>,
    /// SNRs of the group detected second.
    pub snr_second_stage: Vec<f64>,
    /// True when the primary group was moved to the second stage.
    pub switched: bool,
    pub beta_draw: f64,
}

/// Every SNR a frame can produce, before the switching decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSnrs {
    /// First-stage SNR of all M streams.
    pub stage1: Vec<f64>,
    /// Second-stage SNRs of the primary group (secondary group removed).
    pub stage2_primary: Vec<f64>,
    /// Second-stage SNRs of the secondary group (primary group removed).
    pub stage2_secondary: Vec<f64>,
    pub beta: f64,
}

impl FrameSnrs {
    /// Whether the primary group falls back to the second stage. Retention
    /// requires every primary SNR to exceed `gamma_t` strictly.
    pub fn switches(&self, config: &ScenarioConfig, gamma_t: f64) -> bool {
        if config.m1 == 0 || config.m2 == 0 {
            return false;
        }
        self.stage1[config.group(Service::Primary)].iter().any(|s| *s <= gamma_t)
    }

    pub fn outcome(&self, config: &ScenarioConfig, gamma_t: f64) -> TrialOutcome {
        let switched = self.switches(config, gamma_t);
        let (first, second) = if switched {
            (self.stage1[config.group(Service::Secondary)].to_vec(), self.stage2_primary.clone())
        } else {
            (self.stage1[config.group(Service::Primary)].to_vec(), self.stage2_secondary.clone())
        };
        TrialOutcome { snr_first_stage: first, snr_second_stage: second, switched, beta_draw: self.beta }
    }

    /// SNR each stream actually experiences, (primary, secondary).
    fn realized(&self, config: &ScenarioConfig, gamma_t: f64) -> (&[f64], &[f64]) {
        if self.switches(config, gamma_t) {
            (&self.stage2_primary, &self.stage1[config.group(Service::Secondary)])
        } else {
            (&self.stage1[config.group(Service::Primary)], &self.stage2_secondary)
        }
    }
}

/// Zero-forcing SNR of stream `i`: 1 / (‖w_i E‖² + σ²‖w_i‖²) with w_i the
/// i-th row of the pseudo-inverse of the estimated channel.
pub fn snr_zf(estimated: &ComplexMatrix, error: &ComplexMatrix, noise_variance: f64, i: usize) -> Result<f64> {
    if i >= estimated.cols() {
        return Err(Error::domain(format!("stream {i} out of range")));
    }
    let pinv = pseudo_inverse(estimated)?;
    Ok(row_snr(&pinv, error, noise_variance, i))
}

fn row_snr(pinv: &ComplexMatrix, error: &ComplexMatrix, noise_variance: f64, i: usize) -> f64 {
    1.0 / (pinv.row_times_norm_sqr(i, error) + noise_variance * pinv.row_norm_sqr(i))
}

fn zf_snrs(estimated: &ComplexMatrix, error: &ComplexMatrix, noise_variance: f64) -> Result<Vec<f64>> {
    let pinv = pseudo_inverse(estimated)?;
    Ok((0..estimated.cols()).map(|i| row_snr(&pinv, error, noise_variance, i)).collect())
}

/// β, uniform in dB on [−L, L].
fn draw_beta(nu: &NoiseUncertainty, rng: &mut RngStream) -> f64 {
    let u = rng.uniform();
    10f64.powf(nu.l_db * (2.0 * u - 1.0) / 10.0)
}

/// Draws one frame and computes all of its SNRs.
pub fn frame_snrs(
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
    rng: &mut RngStream,
) -> Result<FrameSnrs> {
    let real = realize_channel(profile, config, rng)?;
    let beta = draw_beta(nu, rng);
    let stage1 = zf_snrs(&real.estimated, &real.error, config.noise_power)?;
    let second_noise = nu.n_hat0 / beta;
    let second = |service: Service| -> Result<Vec<f64>> {
        let cols: Vec<usize> = config.group(service).collect();
        if cols.is_empty() {
            return Ok(Vec::new());
        }
        zf_snrs(&real.estimated.select_columns(&cols), &real.error.select_columns(&cols), second_noise)
    };
    Ok(FrameSnrs {
        stage2_primary: second(Service::Primary)?,
        stage2_secondary: second(Service::Secondary)?,
        stage1,
        beta,
    })
}

/// One detector run following the switching rule at the configured γ_T.
pub fn run_trial(
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
    rng: &mut RngStream,
) -> Result<TrialOutcome> {
    Ok(frame_snrs(profile, config, nu, rng)?.outcome(config, config.gamma_t))
}

/// A batch of simulated frames.
#[derive(Debug, Clone)]
pub struct FrameSet {
    config: ScenarioConfig,
    frames: Vec<FrameSnrs>,
    redrawn: usize,
}

/// Empirical CDFs of every stream in both stages.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    pub gamma_grid: Vec<f64>,
    /// `stage1[i][g]`: fraction of frames with first-stage SNR of stream i ≤ grid[g].
    pub stage1: Vec<Vec<f64>>,
    /// Same for the second stage of the stream's own group.
    pub stage2: Vec<Vec<f64>>,
    pub trial_count: usize,
}

impl FrameSet {
    /// Simulates `trials` frames in parallel. Trial `t` uses substream `t`;
    /// rank-deficient draws are redrawn from a reserved substream range.
    pub fn simulate(
        profile: &LinkPowerProfile,
        config: &ScenarioConfig,
        nu: &NoiseUncertainty,
        trials: usize,
        seed: u64,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("at least one trial is required"));
        }
        let results: Vec<Result<(FrameSnrs, usize)>> = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let mut rng = RngStream::new(seed, t);
                let mut redraws = 0;
                loop {
                    match frame_snrs(profile, config, nu, &mut rng) {
                        Ok(f) => return Ok((f, redraws)),
                        Err(Error::Singular { .. }) if (redraws as u64) < MAX_REDRAWS => {
                            rng = RngStream::new(seed, REDRAW_BASE + t * MAX_REDRAWS + redraws as u64);
                            redraws += 1;
                        }
                        Err(e) => return Err(e),
                    }
                }
            })
            .collect();
        let mut frames = Vec::with_capacity(trials);
        let mut redrawn = 0;
        for r in results {
            let (f, n) = r?;
            redrawn += n;
            frames.push(f);
        }
        if redrawn * 1000 > trials {
            return Err(Error::TrialBudget { invalid: redrawn, trials });
        }
        Ok(Self { config: config.clone(), frames, redrawn })
    }

    pub fn frames(&self) -> &[FrameSnrs] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Number of rank-deficient draws that were replaced.
    pub fn redrawn(&self) -> usize {
        self.redrawn
    }

    pub fn outcomes(&self, gamma_t: f64) -> Vec<TrialOutcome> {
        self.frames.iter().map(|f| f.outcome(&self.config, gamma_t)).collect()
    }

    /// Empirical outage at the given thresholds. Totals count frames in which
    /// any stream of the group is in outage.
    pub fn outage_at(&self, gamma_th: f64, gamma_t: f64) -> OutageReport {
        let (m1, m2) = (self.config.m1, self.config.m2);
        let mut s1 = vec![0usize; m1];
        let mut s2 = vec![0usize; m2];
        let (mut any1, mut any2, mut switched) = (0usize, 0usize, 0usize);
        for f in &self.frames {
            if f.switches(&self.config, gamma_t) {
                switched += 1;
            }
            let (p, s) = f.realized(&self.config, gamma_t);
            let mut hit = false;
            for (k, snr) in p.iter().enumerate() {
                if *snr <= gamma_th {
                    s1[k] += 1;
                    hit = true;
                }
            }
            any1 += hit as usize;
            let mut hit = false;
            for (k, snr) in s.iter().enumerate() {
                if *snr <= gamma_th {
                    s2[k] += 1;
                    hit = true;
                }
            }
            any2 += hit as usize;
        }
        let n = self.frames.len() as f64;
        OutageReport {
            per_stream_service1: s1.iter().map(|c| *c as f64 / n).collect(),
            per_stream_service2: s2.iter().map(|c| *c as f64 / n).collect(),
            total_service1: any1 as f64 / n,
            total_service2: any2 as f64 / n,
            switch_probability: switched as f64 / n,
        }
    }

    /// Forced-stage first-stage samples of `stream`, regardless of switching.
    pub fn stage1_samples(&self, stream: usize) -> Vec<f64> {
        self.frames.iter().map(|f| f.stage1[stream]).collect()
    }

    /// Forced-stage second-stage samples of `stream` within its own group.
    pub fn stage2_samples(&self, stream: usize) -> Vec<f64> {
        let m1 = self.config.m1;
        self.frames
            .iter()
            .map(|f| if stream < m1 { f.stage2_primary[stream] } else { f.stage2_secondary[stream - m1] })
            .collect()
    }

    pub fn empirical_cdf(&self, gamma_grid: &[f64]) -> Result<EmpiricalCdf> {
        if gamma_grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::domain("threshold grid must be ascending"));
        }
        let m = self.config.total_streams();
        let curve = |samples: Vec<f64>| ecdf_on_grid(samples, gamma_grid);
        Ok(EmpiricalCdf {
            gamma_grid: gamma_grid.to_vec(),
            stage1: (0..m).map(|i| curve(self.stage1_samples(i))).collect(),
            stage2: (0..m).map(|i| curve(self.stage2_samples(i))).collect(),
            trial_count: self.frames.len(),
        })
    }
}

/// Fraction of `samples` at or below each grid point.
pub fn ecdf_on_grid(mut samples: Vec<f64>, grid: &[f64]) -> Vec<f64> {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    grid.iter().map(|g| samples.partition_point(|s| s <= g) as f64 / n).collect()
}

/// Empirical outage report at the configured thresholds.
pub fn estimate_outage(
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
    trials: usize,
    seed: u64,
) -> Result<OutageReport> {
    Ok(FrameSet::simulate(profile, config, nu, trials, seed)?.outage_at(config.gamma_th, config.gamma_t))
}

/// Empirical per-stream CDFs with forced stage assignment.
pub fn empirical_cdf(
    profile: &LinkPowerProfile,
    config: &ScenarioConfig,
    nu: &NoiseUncertainty,
    trials: usize,
    gamma_grid: &[f64],
    seed: u64,
) -> Result<EmpiricalCdf> {
    FrameSet::simulate(profile, config, nu, trials, seed)?.empirical_cdf(gamma_grid)
}
