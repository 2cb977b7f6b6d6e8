//! Runs both engines on the same scenario and prints the sup-norm gap per
//! curve.
//!
//! cargo run --release --example monte_carlo_crosscheck

use cogmimo::harness::{cmd_validate, db_grid};
use cogmimo::ScenarioConfig;

fn main() -> cogmimo::Result<()> {
    let cfg = ScenarioConfig::new(4, 2, 1, vec![0.05, 0.08, 0.1])
        .with_alpha(0.9)
        .with_tx_snr_db(10.0)
        .with_thresholds(1.0, 1.0)
        .with_trials(100_000, 2024);
    let report = cmd_validate(&cfg, &db_grid(-10.0, 30.0, 41)?, 0.015)?;
    print!("{}", report.to_csv());
    if let Some(w) = report.worst() {
        println!("\nworst curve {} at {:.4}", w.curve, w.sup_norm);
    }
    Ok(())
}
