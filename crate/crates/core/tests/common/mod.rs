#![allow(dead_code)]

use cogfso_core::fso::{Detection, FsoLinkParams, MalagaParams, PointingParams, SpecialCase, special_case_params};
use cogfso_core::outage::ScenarioConfig;
use cogfso_core::rf::{OstbcParams, RfLinkParams, SuTxProfile, ZetaMethod};

pub const ZETA_MILD: f64 = 0.8863;
pub const ZETA_SEVERE: f64 = 0.5908;

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

pub fn link(m: f64, var: f64) -> RfLinkParams {
    RfLinkParams::new(m, var, 3, 2).unwrap()
}

pub fn profile(m: f64, var_sr: f64, var_sp: f64) -> SuTxProfile {
    SuTxProfile::new(link(m, var_sr), link(m, var_sp), db(27.0)).unwrap()
}

pub fn users(m: f64, k: usize) -> Vec<SuTxProfile> {
    vec![profile(m, 1.0, 1.0); k]
}

pub fn ostbc() -> OstbcParams {
    OstbcParams::new(4, 8, 1.0).unwrap()
}

pub fn fig2a_malaga() -> MalagaParams {
    MalagaParams::from_reduced(2.296, 2.0, 0.0872, 0.596, 1.085).unwrap()
}

pub fn gamma_gamma() -> MalagaParams {
    special_case_params(SpecialCase::GammaGamma, 8.0, 4.0).unwrap()
}

pub fn k_dist() -> MalagaParams {
    special_case_params(SpecialCase::KDistribution { xi: 0.2158 }, 8.0, 4.0).unwrap()
}

pub fn fso(malaga: MalagaParams, zeta: f64, detection: Detection, snr_db: f64) -> FsoLinkParams {
    FsoLinkParams::new(malaga, PointingParams::new(zeta, 1.0).unwrap(), detection, db(snr_db)).unwrap()
}

/// K users at m = 1.5 with the first Málaga set and a 3 dB threshold.
pub fn scenario(k: usize, p_a_db: f64, detection: Detection, snr_db: f64) -> ScenarioConfig {
    ScenarioConfig {
        profiles: users(1.5, k),
        p_a: db(p_a_db),
        ostbc: ostbc(),
        fso: fso(fig2a_malaga(), ZETA_MILD, detection, snr_db),
        gamma_th: db(3.0),
        zeta_method: ZetaMethod::ClosedForm,
    }
}

/// Tanh-sinh quadrature of `f` over `(a, b)`, halving the step until two
/// levels agree to `rel`. Nodes near the ends are placed as `a + gap` and
/// `b - gap` so endpoint singularities are never evaluated.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    const T_MAX: f64 = 6.5;
    let half = 0.5 * (b - a);
    let pair = |t: f64| {
        let u = FRAC_PI_2 * t.sinh();
        let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
        let gap = half / (u.exp() * u.cosh());
        if w == 0.0 || gap == 0.0 {
            return 0.0;
        }
        w * (f(a + gap) + f(b - gap))
    };
    let mut h = 1.0;
    let mut sum = f(a + half) * FRAC_PI_2;
    let mut t = h;
    while t <= T_MAX {
        sum += pair(t);
        t += h;
    }
    let mut prev = half * h * sum;
    for _ in 0..12 {
        h *= 0.5;
        let mut t = h;
        while t <= T_MAX {
            sum += pair(t);
            t += 2.0 * h;
        }
        let cur = half * h * sum;
        if (cur - prev).abs() <= rel * cur.abs() {
            return cur;
        }
        prev = cur;
    }
    prev
}
