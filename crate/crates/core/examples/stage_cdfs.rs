//! First- and second-stage SNR CDFs for every stream of a small scenario,
//! with the high-SNR approximation alongside.
//!
//! cargo run --example stage_cdfs

use cogmimo::stats::{cdf_stage1, cdf_stage1_high_snr, cdf_stage2, cdf_stage2_high_snr};
use cogmimo::{build_profile, NoiseUncertainty, ScenarioConfig};

fn main() -> cogmimo::Result<()> {
    let cfg = ScenarioConfig::new(4, 2, 1, vec![0.05, 0.08, 0.1]).with_alpha(0.9).with_tx_snr_db(10.0);
    let prof = build_profile(&cfg)?;
    let nu = NoiseUncertainty::from_config(&cfg)?;
    println!("stream,gamma_db,stage1,stage1_high_snr,stage2,stage2_high_snr");
    for i in 0..cfg.total_streams() {
        for db in (-10..=30).step_by(5) {
            let g = cogmimo::numerics::db_to_linear(db as f64);
            println!(
                "{i},{db},{:.6},{:.6},{:.6},{:.6}",
                cdf_stage1(g, i, &prof, &cfg)?,
                cdf_stage1_high_snr(g, i, &prof, &cfg)?,
                cdf_stage2(g, i, &prof, &cfg, &nu)?,
                cdf_stage2_high_snr(g, i, &prof, &cfg, &nu)?,
            );
        }
    }
    Ok(())
}
