//! Shared fixtures for the criterion benches.

use cogfso_core::fso::{Detection, FsoLinkParams, MalagaParams, PointingParams};
use cogfso_core::outage::ScenarioConfig;
use cogfso_core::rf::{OstbcParams, RfLinkParams, SuTxProfile, ZetaMethod};

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// Three identical users, m = 1.5, with the first Málaga channel at 30 dB.
pub fn scenario(detection: Detection) -> ScenarioConfig {
    let link = RfLinkParams::new(1.5, 1.0, 3, 2).unwrap();
    let user = SuTxProfile::new(link, link, db(27.0)).unwrap();
    let malaga = MalagaParams::from_reduced(2.296, 2.0, 0.0872, 0.596, 1.085).unwrap();
    let pointing = PointingParams::new(0.8863, 1.0).unwrap();
    ScenarioConfig {
        profiles: vec![user; 3],
        p_a: db(10.0),
        ostbc: OstbcParams::new(4, 8, 1.0).unwrap(),
        fso: FsoLinkParams::new(malaga, pointing, detection, db(30.0)).unwrap(),
        gamma_th: db(3.0),
        zeta_method: ZetaMethod::ClosedForm,
    }
}
