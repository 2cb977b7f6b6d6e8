use cogmimo::harness::{format_value, CurveTable};
use cogmimo::montecarlo::FrameSet;
use cogmimo::numerics::{
    bessel_j0, pseudo_inverse, sample_complex_gaussian, upper_incomplete_gamma, ComplexMatrix, RngStream,
};
use cogmimo::outage::report_at;
use cogmimo::planner::{
    asymptotic_snr_stage1, asymptotic_snr_stage2, coherence_time_iid, lagrange_multiplier, optimality_condition,
    scan_m2,
};
use cogmimo::stats::{cdf_stage1, cdf_stage2, residual_spectrum, NoiseUncertainty, SnrLaw, COALESCE_TOLERANCE};
use cogmimo::{build_profile, ScenarioConfig};
use proptest::prelude::*;

fn scenario() -> impl Strategy<Value = ScenarioConfig> {
    (1usize..=3, 0usize..=2, 0usize..=2, 0.5f64..1.0, 0.0f64..20.0, any::<bool>())
        .prop_flat_map(|(m1, m2, extra, alpha, db, iid)| {
            let m = m1 + m2;
            (
                Just((m1, m2, extra, alpha, db)),
                prop::collection::vec(0.03f64..0.6, if iid { 1 } else { m }),
                Just(m),
            )
        })
        .prop_map(|((m1, m2, extra, alpha, db), d, m)| {
            let distances = if d.len() == 1 { vec![d[0]; m] } else { d };
            ScenarioConfig::new(m + extra, m1, m2, distances).with_alpha(alpha).with_tx_snr_db(db)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pinv_is_left_inverse(seed in any::<u64>(), rows in 1usize..8, cols_off in 0usize..4) {
        let cols = rows.saturating_sub(cols_off).max(1);
        let vars: Vec<f64> = (0..cols).map(|j| 0.5 + j as f64).collect();
        let m = sample_complex_gaussian(rows, cols, &vars, &mut RngStream::new(seed, 0)).unwrap();
        let p = pseudo_inverse(&m).unwrap();
        prop_assert!(p.mul(&m).unwrap().max_abs_diff(&ComplexMatrix::identity(cols)) <= 1e-9);
    }

    #[test]
    fn j0_is_even(x in -50.0f64..50.0) {
        prop_assert_eq!(bessel_j0(x).unwrap(), bessel_j0(-x).unwrap());
    }

    #[test]
    fn upper_gamma_decreasing(a in 1u32..12, x in 0.0f64..40.0, dx in 1e-3f64..5.0) {
        prop_assert!(upper_incomplete_gamma(a, x + dx).unwrap() < upper_incomplete_gamma(a, x).unwrap());
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), stream in any::<u64>()) {
        let draw = |_: ()| {
            let mut rng = RngStream::new(seed, stream);
            sample_complex_gaussian(3, 2, &[1.0, 0.3], &mut rng).unwrap()
        };
        let first = draw(());
        let _unrelated = sample_complex_gaussian(2, 2, &[1.0, 1.0], &mut RngStream::new(seed ^ 1, stream)).unwrap();
        prop_assert_eq!(first, draw(()));
    }

    #[test]
    fn coefficients_sum_to_one(values in prop::collection::vec(0.05f64..10.0, 1..7), dup in 0usize..3) {
        let mut v = values.clone();
        for k in 0..dup.min(v.len()) {
            v.push(values[k]);
        }
        if let Ok(s) = residual_spectrum(&v, COALESCE_TOLERANCE) {
            // Close poles give large cancelling coefficients; allow roundoff
            // proportional to their magnitude.
            let scale: f64 = s.char_coeff.iter().flatten().map(|x| x.abs()).sum();
            prop_assert!((s.coefficient_sum() - 1.0).abs() <= 1e-10 + 64.0 * f64::EPSILON * scale, "{:?}", s);
        }
    }

    #[test]
    fn stage_cdfs_are_distributions(cfg in scenario(), g1 in 1e-3f64..1e3, g2 in 1e-3f64..1e3) {
        let prof = build_profile(&cfg).unwrap();
        let nu = NoiseUncertainty::from_config(&cfg).unwrap();
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        for i in 0..cfg.total_streams() {
            prop_assert_eq!(cdf_stage1(0.0, i, &prof, &cfg).unwrap(), 0.0);
            let (a, b) = (cdf_stage1(lo, i, &prof, &cfg).unwrap(), cdf_stage1(hi, i, &prof, &cfg).unwrap());
            prop_assert!((0.0..=1.0).contains(&a) && b >= a - 1e-12);
            let (a, b) = (cdf_stage2(lo, i, &prof, &cfg, &nu).unwrap(), cdf_stage2(hi, i, &prof, &cfg, &nu).unwrap());
            prop_assert!((0.0..=1.0).contains(&a) && b >= a - 1e-12);
        }
    }

    #[test]
    fn cdf_ignores_interferer_order(mut res in prop::collection::vec(0.05f64..3.0, 2..5), gamma in 0.01f64..20.0) {
        let law = SnrLaw::from_parts(1.3, 6, &res).unwrap();
        let f = law.cdf(gamma, 1.0).unwrap();
        res.reverse();
        let g = SnrLaw::from_parts(1.3, 6, &res).unwrap().cdf(gamma, 1.0).unwrap();
        prop_assert!((f - g).abs() < 1e-9);
    }

    #[test]
    fn more_residual_power_raises_outage(res in prop::collection::vec(0.05f64..3.0, 1..4), bump in 0.1f64..2.0, gamma in 0.05f64..20.0) {
        let base = SnrLaw::from_parts(2.0, 5, &res).unwrap().cdf(gamma, 1.0).unwrap();
        let mut worse = res.clone();
        worse[0] += bump;
        let more = SnrLaw::from_parts(2.0, 5, &worse).unwrap().cdf(gamma, 1.0).unwrap();
        prop_assert!(more >= base - 1e-10);
    }

    #[test]
    fn outage_report_is_consistent(cfg in scenario(), gth in 0.05f64..50.0, gt in 0.05f64..50.0) {
        let prof = build_profile(&cfg).unwrap();
        let nu = NoiseUncertainty::from_config(&cfg).unwrap();
        let r = report_at(gth, gt, &prof, &cfg, &nu).unwrap();
        for p in r.per_stream_service1.iter().chain(&r.per_stream_service2) {
            prop_assert!((0.0..=1.0).contains(p));
        }
        let max1 = r.per_stream_service1.iter().cloned().fold(0.0, f64::max);
        prop_assert!(r.total_service1 >= max1 - 1e-15);
        prop_assert!((0.0..=1.0).contains(&r.switch_probability));
    }

    #[test]
    fn condition_scale_invariant(m2 in 1usize..200, extra in 1usize..300, a in 0.3f64..0.9999, p in 1e-3f64..1e3) {
        let n = m2 + extra;
        prop_assert_eq!(
            optimality_condition(m2, n, a, p, p).unwrap(),
            optimality_condition(m2, n, a, 10.0 * p, 10.0 * p).unwrap()
        );
    }

    #[test]
    fn scan_returns_frontier(n in 2usize..400, m1 in 0usize..40, a in 0.3f64..0.9999, g in 0.1f64..10.0) {
        let r = scan_m2(n, m1, a, 1.0, |_| Ok(1.0), g).unwrap();
        if r.m2_star > 0 {
            prop_assert!(optimality_condition(r.m2_star, n, a, 1.0, 1.0).unwrap());
            prop_assert!(r.lambda_diag.unwrap() >= 0.0);
        }
        for m2 in (r.m2_star + 1)..=n.saturating_sub(m1) {
            prop_assert!(!optimality_condition(m2, n, a, 1.0, 1.0).unwrap());
        }
        // Neither M₁ (beyond the scan start) nor γ_th enters the condition.
        let other = scan_m2(n, m1, a, 1.0, |_| Ok(1.0), 2.0 * g).unwrap();
        prop_assert_eq!(other.m2_star, r.m2_star);
    }

    #[test]
    fn multiplier_nonnegative_where_condition_holds(m2 in 1usize..100, m1 in 0usize..20, extra in 0usize..100, a in 0.3f64..0.999) {
        let n = m1 + m2 + extra;
        if optimality_condition(m2, n, a, 1.0, 1.0).unwrap() {
            prop_assert!(lagrange_multiplier(m2, n, m1, a, 1.0, 1.0, 1.0).unwrap() >= 0.0);
        }
    }

    #[test]
    fn second_stage_asymptote_dominates(cfg in scenario()) {
        let prof = build_profile(&cfg).unwrap();
        for i in 0..cfg.total_streams() {
            let s1 = asymptotic_snr_stage1(i, &prof, &cfg).unwrap().value();
            let s2 = asymptotic_snr_stage2(i, &prof, &cfg).unwrap().value();
            prop_assert!(s2 >= s1);
        }
    }

    #[test]
    fn coherence_monotone(m in 1usize..30, extra in 0usize..200, a in 0.9f64..0.99999, g in 0.1f64..10.0) {
        let n = m + extra;
        let base = coherence_time_iid(m, n, a, g).unwrap().t_max;
        prop_assert!(coherence_time_iid(m, n + 1, a, g).unwrap().t_max >= base);
        prop_assert!(coherence_time_iid(m, n, (a + 1.0) / 2.0, g).unwrap().t_max >= base);
        if m + 1 <= n {
            prop_assert!(coherence_time_iid(m + 1, n, a, g).unwrap().t_max <= base);
        }
    }

    #[test]
    fn csv_values_round_trip(v in prop::num::f64::NORMAL | prop::num::f64::ZERO | prop::num::f64::SUBNORMAL) {
        prop_assert_eq!(format_value(v).parse::<f64>().unwrap(), v);
        let mut t = CurveTable::new(vec!["x".into()]);
        t.push(vec![v]).unwrap();
        prop_assert_eq!(CurveTable::from_csv(&t.to_csv()).unwrap(), t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn simulation_is_reproducible(seed in any::<u64>()) {
        let cfg = ScenarioConfig::new(4, 2, 1, vec![0.05, 0.08, 0.1]).with_alpha(0.9);
        let prof = build_profile(&cfg).unwrap();
        let nu = NoiseUncertainty::from_config(&cfg).unwrap();
        let a = FrameSet::simulate(&prof, &cfg, &nu, 300, seed).unwrap();
        let b = FrameSet::simulate(&prof, &cfg, &nu, 300, seed).unwrap();
        prop_assert_eq!(a.frames(), b.frames());
    }
}
