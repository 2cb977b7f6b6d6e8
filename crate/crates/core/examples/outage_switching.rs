//! Per-stream and group outage under the switching rule as the switching
//! threshold moves.
//!
//! cargo run --example outage_switching

use cogmimo::outage::report_at;
use cogmimo::{build_profile, NoiseUncertainty, ScenarioConfig};

fn main() -> cogmimo::Result<()> {
    let cfg = ScenarioConfig::new(4, 2, 1, vec![0.05, 0.08, 0.1]).with_alpha(0.9).with_tx_snr_db(10.0);
    let prof = build_profile(&cfg)?;
    let nu = NoiseUncertainty::from_config(&cfg)?;
    println!("gamma_t,switch_prob,total_s1,total_s2");
    for gamma_t in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let r = report_at(1.0, gamma_t, &prof, &cfg, &nu)?;
        println!("{gamma_t},{:.5},{:.5},{:.5}", r.switch_probability, r.total_service1, r.total_service2);
    }
    Ok(())
}
