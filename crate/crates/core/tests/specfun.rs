mod common;

use cogfso_core::specfun::*;
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn incomplete_gamma_reference_values() {
    assert!((lower_inc_gamma(1.0, 1.0).unwrap() - (1.0 - (-1f64).exp())).abs() < 1e-15);
    assert_eq!(lower_inc_gamma(2.5, 0.0).unwrap(), 0.0);
    assert!(rel(lower_inc_gamma(9.0, 4.7).unwrap(), 2026.3184160977178) < 1e-13);

    assert!((upper_inc_gamma(3.0, 0.0).unwrap() - 2.0).abs() < 1e-14);
    assert!(rel(upper_inc_gamma(1.0, 2.0).unwrap(), (-2f64).exp()) < 1e-14);
    assert!(rel(upper_inc_gamma(15.0, 30.1).unwrap(), 75_905_166.038_860_28) < 1e-12);
}

#[test]
fn incomplete_gamma_limits_and_domain() {
    assert!(rel(lower_inc_gamma(4.0, f64::INFINITY).unwrap(), 6.0) < 1e-14);
    assert_eq!(upper_inc_gamma(4.0, f64::INFINITY).unwrap(), 0.0);
    assert!(lower_inc_gamma(0.0, 1.0).is_err());
    assert!(lower_inc_gamma(1.0, -1.0).is_err());
    assert!(upper_inc_gamma(f64::NAN, 1.0).is_err());
    // large shapes stay finite in log space
    assert!(ln_upper_inc_gamma(23.0, 1e-3).unwrap().is_finite());
}

#[test]
fn erf_reference_values() {
    assert_eq!(erf(0.0).unwrap(), 0.0);
    assert!((erf(1.234).unwrap() + erf(-1.234).unwrap()).abs() < 1e-16);
    let e1 = erf(1.0).unwrap();
    assert!((e1 - 0.842_700_792_949_714_9).abs() < 1e-15, "{e1:.17}");
    assert_eq!(erf(f64::INFINITY).unwrap(), 1.0);
    assert!(erf(f64::NAN).is_err());
}

#[test]
fn bessel_k_reference_values() {
    let half = (std::f64::consts::PI / 4.0).sqrt() * (-2f64).exp();
    assert!(rel(bessel_k(0.5, 2.0).unwrap(), half) < 1e-14);
    assert!(rel(bessel_k(1.3, 1.0).unwrap(), bessel_k(-1.3, 1.0).unwrap()) < 1e-15);
    assert!(rel(bessel_k(6.296, 3.5).unwrap(), 1.712350868639805) < 1e-10);
    assert!(bessel_k(1.0, 0.0).is_err());
    assert!(bessel_k(1.0, -2.0).is_err());
    assert!(bessel_k(200.0, 1e-3).is_err());
    assert!(ln_bessel_k(200.0, 1e-3).unwrap().is_finite());
}

#[test]
fn meijer_g_reference_values() {
    let e = MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap();
    assert!(rel(meijer_g(&e, 0.7).unwrap(), (-0.7f64).exp()) < 1e-12);

    let k = MeijerGSpec::new(2, 0, vec![], vec![1.2, 0.4]).unwrap();
    let want = 2.0 * 0.9f64.powf(0.8) * bessel_k(0.8, 2.0 * 0.9f64.sqrt()).unwrap();
    assert!(rel(meijer_g(&k, 0.9).unwrap(), want) < 1e-10);

    let z2 = 0.8863f64 * 0.8863;
    for (k, want) in [(1.0, 0.33732233175735726), (2.0, 0.3126903416215357)] {
        let spec = MeijerGSpec::new(3, 0, vec![z2 + 1.0], vec![z2, 2.296, k]).unwrap();
        assert!(rel(meijer_g(&spec, 0.5).unwrap(), want) < 1e-10, "k = {k}");
    }
}

#[test]
fn meijer_g_rejects_unsupported_shapes() {
    let square = MeijerGSpec::new(1, 1, vec![0.5], vec![0.0]).unwrap();
    assert!(meijer_g(&square, 0.5).unwrap_err().to_string().contains("meijer_g"));
    assert!(MeijerGSpec::new(3, 0, vec![], vec![0.0, 1.0]).is_err());
    let ok = MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap();
    assert!(meijer_g(&ok, 0.0).is_err());
    assert!(meijer_g(&ok, f64::NAN).is_err());
}

#[test]
fn meijer_g_handles_integer_spaced_poles() {
    // G^{2,0}_{0,2}(x | b, b+2) = 2 x^{b+1} K_2(2√x)
    let spec = MeijerGSpec::new(2, 0, vec![], vec![1.0, 3.0]).unwrap();
    for &x in &[0.01f64, 0.3, 2.0, 15.0] {
        let want = 2.0 * x.powf(2.0) * bessel_k(2.0, 2.0 * x.sqrt()).unwrap();
        assert!(rel(meijer_g(&spec, x).unwrap(), want) < 1e-9, "x = {x}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn incomplete_gamma_sum_identity(s in 0.05f64..40.0, x in 0.0f64..80.0) {
        let total = gamma(s).unwrap();
        let sum = lower_inc_gamma(s, x).unwrap() + upper_inc_gamma(s, x).unwrap();
        prop_assert!(rel(sum, total) <= 1e-12, "s={s} x={x} sum={sum} total={total}");
    }

    #[test]
    fn incomplete_gamma_recurrence(s in 0.05f64..30.0, x in 0.01f64..60.0) {
        let lhs = lower_inc_gamma(s + 1.0, x).unwrap();
        let rhs = s * lower_inc_gamma(s, x).unwrap() - x.powf(s) * (-x).exp();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1e-300), "s={s} x={x}");
    }

    #[test]
    fn regularized_gammas_are_complementary(s in 0.1f64..50.0, x in 0.0f64..100.0) {
        let p = gamma_p(s, x).unwrap();
        let q = gamma_q(s, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&q));
        prop_assert!((p + q - 1.0).abs() < 1e-13);
    }

    #[test]
    fn erf_is_odd_and_bounded(x in -8.0f64..8.0) {
        let v = erf(x).unwrap();
        prop_assert!((-1.0..=1.0).contains(&v));
        prop_assert_eq!(v, -erf(-x).unwrap());
    }

    #[test]
    fn bessel_k_order_symmetry_and_monotone(v in -12.0f64..12.0, x in 0.05f64..30.0) {
        let k = bessel_k(v, x).unwrap();
        prop_assert!(rel(bessel_k(-v, x).unwrap(), k) < 1e-14);
        prop_assert!(bessel_k(v, x * 1.01).unwrap() < k);
    }

    #[test]
    fn bessel_k_half_integer_closed_forms(x in 0.05f64..40.0) {
        let k12 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp();
        prop_assert!(rel(bessel_k(0.5, x).unwrap(), k12) <= 1e-10);
        prop_assert!(rel(bessel_k(1.5, x).unwrap(), k12 * (1.0 + 1.0 / x)) <= 1e-10);
        prop_assert!(rel(bessel_k(2.5, x).unwrap(), k12 * (1.0 + 3.0 / x + 3.0 / (x * x))) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn meijer_exponential_identity(x in 1e-3f64..40.0) {
        let spec = MeijerGSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        prop_assert!(rel(meijer_g(&spec, x).unwrap(), (-x).exp()) <= 1e-8);
    }

    #[test]
    fn meijer_bessel_identity(a in 0.0f64..6.0, b in 0.0f64..6.0, x in 1e-3f64..30.0) {
        let spec = MeijerGSpec::new(2, 0, vec![], vec![a, b]).unwrap();
        let want = 2.0 * x.powf(0.5 * (a + b)) * bessel_k(a - b, 2.0 * x.sqrt()).unwrap();
        prop_assert!(rel(meijer_g(&spec, x).unwrap(), want) <= 1e-8, "a={a} b={b} x={x}");
    }
}
