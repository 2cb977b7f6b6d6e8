//! Cross-checks between the analytic and simulation engines.

use cogmimo::harness::{cmd_analyze, cmd_simulate, cmd_validate, cmd_validate_pair, db_grid};
use cogmimo::ScenarioConfig;

fn reference() -> ScenarioConfig {
    ScenarioConfig::new(4, 2, 1, vec![0.05, 0.08, 0.1])
        .with_alpha(0.9)
        .with_tx_snr_db(10.0)
        .with_thresholds(1.0, 1.0)
        .with_trials(50_000, 2024)
}

#[test]
fn stage_curves_agree_between_engines() {
    let grid = db_grid(-10.0, 30.0, 21).unwrap();
    let report = cmd_validate(&reference(), &grid, 0.015).unwrap();
    for c in report.curves.iter().filter(|c| c.curve.starts_with("stage")) {
        assert!(c.passed, "{c:?}");
    }
}

#[test]
fn mismatched_switch_threshold_is_detected() {
    let grid = db_grid(-10.0, 30.0, 21).unwrap();
    let matched = cmd_validate(&reference(), &grid, 0.2).unwrap();
    assert!(matched.passed, "{:?}", matched.worst());
    for wrong_t in [0.1, 10.0] {
        let sim = reference().with_thresholds(1.0, wrong_t);
        let r = cmd_validate_pair(&reference(), &sim, &grid, 0.2).unwrap();
        assert!(!r.passed, "γ_T = {wrong_t}: {:?}", r.worst());
        assert!(r.worst().unwrap().sup_norm > matched.worst().unwrap().sup_norm);
        // The stage laws do not depend on γ_T.
        for c in r.curves.iter().filter(|c| c.curve.starts_with("stage")) {
            assert!(c.sup_norm <= 0.015, "{c:?}");
        }
    }
}

#[test]
fn unit_tolerance_always_passes() {
    let grid = db_grid(0.0, 20.0, 5).unwrap();
    let cfg = reference().with_trials(2_000, 7);
    assert!(cmd_validate(&cfg, &grid, 1.0).unwrap().passed);
}

#[test]
fn engines_share_columns() {
    let grid = db_grid(0.0, 10.0, 3).unwrap();
    let cfg = reference().with_trials(1_000, 3);
    let a = cmd_analyze(&cfg, &grid).unwrap();
    let s = cmd_simulate(&cfg, &grid).unwrap();
    assert_eq!(&s.headers[..a.headers.len()], &a.headers[..]);
    assert_eq!(s.headers.last().unwrap(), "trial_count");
    assert!(s.column("trial_count").unwrap().iter().all(|&n| n == 1_000.0));
}
