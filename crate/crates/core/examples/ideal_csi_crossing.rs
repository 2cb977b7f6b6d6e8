//! With perfect, unaged estimates the primary group's total outage falls
//! below the secondary group's only past a certain transmit SNR.
//!
//! cargo run --example ideal_csi_crossing

use cogmimo::outage::report_at;
use cogmimo::{build_profile, NoiseUncertainty, ScenarioConfig};

fn main() -> cogmimo::Result<()> {
    println!("tx_snr_db,total_s1,total_s2");
    for db in 0..=30 {
        let cfg = ScenarioConfig::new(4, 2, 2, vec![0.95, 0.95, 0.75, 0.75])
            .with_alpha(1.0)
            .with_massive_limit(true)
            .with_tx_snr_db(db as f64);
        let prof = build_profile(&cfg)?;
        let nu = NoiseUncertainty::from_config(&cfg)?;
        let r = report_at(cfg.gamma_th, cfg.gamma_t, &prof, &cfg, &nu)?;
        println!("{db},{:.5},{:.5}", r.total_service1, r.total_service2);
    }
    Ok(())
}
