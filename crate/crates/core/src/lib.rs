//! Priority-based two-stage zero-forcing detection for multiuser MIMO with
//! imperfect and aged channel state information.
//!
//! The crate pairs exact outage expressions for a receiver that detects a
//! high-priority service group first (and swaps the order when that group's
//! weakest stream falls below a switching threshold) with a frame-level Monte
//! Carlo simulator of the same receive chain. A large-array planner sizes the
//! admissible secondary group and the usable coherence time.
//!
//! Module map:
//! - [`numerics`]: Bessel J₀, incomplete gamma, complex pseudo-inverse, RNG substreams
//! - [`channel`]: link budget, estimation error, aging, channel draws
//! - [`stats`]: per-stream SNR CDFs for both stages
//! - [`outage`]: per-stream and group outage with the switching rule
//! - [`montecarlo`]: simulation of the detector
//! - [`planner`]: asymptotic SNRs, secondary admission, coherence time
//! - [`harness`]: scenario files, curve tables and the command implementations

pub mod channel;
pub mod error;
pub mod harness;
pub mod montecarlo;
pub mod numerics;
pub mod outage;
pub mod planner;
pub mod stats;

pub use channel::{build_profile, LinkPowerProfile, ScenarioConfig, Service};
pub use error::{Error, Result};
pub use stats::{NoiseUncertainty, Stage};
