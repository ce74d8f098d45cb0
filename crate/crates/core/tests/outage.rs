mod common;

use common::*;
use cogfso_core::fso::{snr_cdf, Detection};
use cogfso_core::outage::*;
use cogfso_core::rf::{snr_star_cdf, ZetaMethod};
use cogfso_core::Error;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

const DETECTIONS: [Detection; 2] = [Detection::Heterodyne, Detection::ImDd];

#[test]
fn validation() {
    let s = scenario(3, 10.0, Detection::ImDd, 30.0);
    assert!(s.validate().is_ok());
    assert_eq!(s.users(), 3);

    let mut bad = s.clone();
    bad.profiles.clear();
    assert!(bad.validate().is_err());
    let mut bad = s.clone();
    bad.gamma_th = 0.0;
    assert!(matches!(bad.validate(), Err(Error::InvalidParameter { field: "gamma_th", .. })));
    let mut bad = s.clone();
    bad.profiles[1].sr.m = 1.3;
    assert!(matches!(bad.validate(), Err(Error::InvalidParameter { field: "m", .. })));
    bad.zeta_method = ZetaMethod::Auto;
    assert!(bad.validate().is_ok());
}

#[test]
fn terms_compose_hops() {
    let s = scenario(3, 15.0, Detection::ImDd, 30.0);
    let t = outage_terms(&s).unwrap();
    assert_eq!(t.rf, snr_star_cdf(s.gamma_th, &s.profiles, s.p_a, &s.ostbc).unwrap());
    assert_eq!(t.fso, snr_cdf(s.gamma_th, &s.fso).unwrap());
    assert_eq!(t.total, end_to_end_outage(&s).unwrap());
    assert!(t.total >= t.rf.max(t.fso) && t.total <= t.rf + t.fso);
    let deep = outage_terms(&scenario(3, 30.0, Detection::ImDd, 30.0)).unwrap();
    assert!(deep.rf > 0.0 && deep.total >= deep.fso);
    assert_eq!(floor_rd_infinity(&s).unwrap(), t.rf);
}

#[test]
fn huge_threshold_is_certain_outage() {
    let mut s = scenario(3, 15.0, Detection::ImDd, 30.0);
    s.gamma_th = 1e12;
    assert!(end_to_end_outage(&s).unwrap() > 1.0 - 1e-12);
}

#[test]
fn optical_floor_reached_at_high_average_snr() {
    // the RF term must dominate for the optical floor to be visible
    for det in DETECTIONS {
        let s = scenario(3, 0.0, det, 80.0);
        let floor = floor_rd_infinity(&s).unwrap();
        let exact = end_to_end_outage(&s).unwrap();
        assert!(exact >= floor && rel(exact, floor) < 1e-4, "{exact} vs {floor}");
    }
    let a = floor_rd_infinity(&scenario(3, 10.0, Detection::Heterodyne, 30.0)).unwrap();
    let b = floor_rd_infinity(&scenario(3, 10.0, Detection::ImDd, 40.0)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn cap_floor_reached_at_high_interference_cap() {
    for det in DETECTIONS {
        let s = scenario(3, 60.0, det, 30.0);
        let floor = floor_pa_infinity(&s).unwrap();
        let exact = end_to_end_outage(&s).unwrap();
        assert!(rel(exact, floor) < 1e-4, "{exact} vs {floor}");
    }
}

#[test]
fn cap_floor_falls_with_average_snr() {
    for det in DETECTIONS {
        let lo = floor_pa_infinity(&scenario(3, 20.0, det, 30.0)).unwrap();
        let hi = floor_pa_infinity(&scenario(3, 20.0, det, 40.0)).unwrap();
        assert!(hi < lo);
    }
}

#[test]
fn user_count_floor_gap_is_bounded_by_rf_terms() {
    // at a large cap both floors are dominated by the optical term
    for det in DETECTIONS {
        let one = floor_pa_infinity(&scenario(1, 30.0, det, 30.0)).unwrap();
        let three = floor_pa_infinity(&scenario(3, 30.0, det, 30.0)).unwrap();
        let s1 = scenario(1, 30.0, det, 30.0);
        let rf1 = floor_rd_infinity(&ScenarioConfig { p_a: 1e12, ..s1 }).unwrap();
        assert!(three <= one && one - three <= rf1 + 1e-15);
    }
}

#[test]
fn sweep_orderings() {
    let grid: Vec<f64> = (0..=6).map(|i| 5.0 * i as f64).collect();
    for det in DETECTIONS {
        let mut prev = 1.0;
        for &p in &grid {
            let three = end_to_end_outage(&scenario(3, p, det, 30.0)).unwrap();
            let one = end_to_end_outage(&scenario(1, p, det, 30.0)).unwrap();
            assert!(three <= one, "P_A = {p}");
            assert!(three <= prev + 1e-15);
            prev = three;
            let better = end_to_end_outage(&scenario(3, p, det, 40.0)).unwrap();
            assert!(better <= three);
        }
    }
    for &p in &grid {
        let het = end_to_end_outage(&scenario(3, p, Detection::Heterodyne, 30.0)).unwrap();
        let im = end_to_end_outage(&scenario(3, p, Detection::ImDd, 30.0)).unwrap();
        assert!(het <= im, "P_A = {p}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn union_and_independence_bounds(
        p_a_db in -10.0f64..50.0,
        snr_db in 10.0f64..60.0,
        th_db in -5.0f64..15.0,
        k in 1usize..=4,
        het in any::<bool>(),
    ) {
        let det = if het { Detection::Heterodyne } else { Detection::ImDd };
        let mut s = scenario(k, p_a_db, det, snr_db);
        s.gamma_th = db(th_db);
        let t = outage_terms(&s).unwrap();
        prop_assert!((0.0..=1.0).contains(&t.total));
        prop_assert!(t.total >= t.rf.max(t.fso) - 1e-15);
        prop_assert!(t.total <= t.rf + t.fso + 1e-15);
    }

    #[test]
    fn nondecreasing_in_threshold(th_db in -5.0f64..12.0, step in 0.1f64..3.0, p_a_db in 0.0f64..30.0) {
        let mut s = scenario(3, p_a_db, Detection::ImDd, 30.0);
        s.gamma_th = db(th_db);
        let lo = end_to_end_outage(&s).unwrap();
        s.gamma_th = db(th_db + step);
        prop_assert!(end_to_end_outage(&s).unwrap() >= lo);
    }

    #[test]
    fn nonincreasing_in_cap_and_average_snr(p_a_db in -5.0f64..40.0, snr_db in 15.0f64..50.0, step in 0.1f64..5.0) {
        let base = end_to_end_outage(&scenario(3, p_a_db, Detection::Heterodyne, snr_db)).unwrap();
        prop_assert!(end_to_end_outage(&scenario(3, p_a_db + step, Detection::Heterodyne, snr_db)).unwrap() <= base + 1e-15);
        prop_assert!(end_to_end_outage(&scenario(3, p_a_db, Detection::Heterodyne, snr_db + step)).unwrap() <= base + 1e-15);
    }
}
