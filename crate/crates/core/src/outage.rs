//! End-to-end outage of the decode-and-forward RF/FSO chain and its floors.
//!
//! Every symbol of an OSTBC block sees the same SNR statistics, so the
//! block-average outage equals the single-symbol outage and is evaluated once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fso::{snr_cdf, FsoLinkParams};
use crate::rf::{snr_star_cdf_pa_infinity, snr_star_cdf_with, snr_to_metric, OstbcParams, SuTxProfile, ZetaMethod};

/// A complete experiment: users, interference cap, code, optical hop, threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub profiles: Vec<SuTxProfile>,
    /// Interference power cap at the PU-RX (watts).
    pub p_a: f64,
    pub ostbc: OstbcParams,
    pub fso: FsoLinkParams,
    /// Outage SNR threshold (linear).
    pub gamma_th: f64,
    #[serde(default)]
    pub zeta_method: ZetaMethod,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.profiles.is_empty() {
            return Err(Error::param("profiles", "at least one SU-TX is required"));
        }
        for p in &self.profiles {
            p.validate()?;
        }
        if !(self.p_a.is_finite() && self.p_a > 0.0) {
            return Err(Error::param("p_a", format!("must be positive and finite, got {}", self.p_a)));
        }
        if !(self.gamma_th.is_finite() && self.gamma_th > 0.0) {
            return Err(Error::param("gamma_th", format!("must be positive and finite, got {}", self.gamma_th)));
        }
        self.fso.validate()?;
        snr_to_metric(&self.profiles, &self.ostbc)?;
        if self.zeta_method == ZetaMethod::ClosedForm {
            if let Some(p) = self.profiles.iter().find(|p| p.sr.integer_shape().is_none()) {
                return Err(Error::param(
                    "m",
                    format!(
                        "S→R shape m·N_S·N_R = {} is not an integer; enable the quadrature fallback",
                        p.sr.shape()
                    ),
                ));
            }
        }
        Ok(())
    }

    pub fn users(&self) -> usize {
        self.profiles.len()
    }
}

/// Per-hop outage probabilities at the threshold and their combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageTerms {
    pub rf: f64,
    pub fso: f64,
    pub total: f64,
}

/// `1 - (1 - a)(1 - b)`: outage of two independent hops.
pub fn combine(rf: f64, fso: f64) -> f64 {
    // a + b(1 - a) keeps full relative precision when both are small
    (rf + fso * (1.0 - rf)).max(rf.max(fso)).min(1.0)
}

pub fn outage_terms(s: &ScenarioConfig) -> Result<OutageTerms> {
    s.validate()?;
    let rf = snr_star_cdf_with(s.gamma_th, &s.profiles, s.p_a, &s.ostbc, s.zeta_method)?;
    let fso = snr_cdf(s.gamma_th, &s.fso)?;
    Ok(OutageTerms { rf, fso, total: combine(rf, fso) })
}

/// Probability that the weaker hop's SNR is at or below the threshold.
pub fn end_to_end_outage(s: &ScenarioConfig) -> Result<f64> {
    Ok(outage_terms(s)?.total)
}

/// Outage limit as the optical average SNR grows without bound.
pub fn floor_rd_infinity(s: &ScenarioConfig) -> Result<f64> {
    s.validate()?;
    snr_star_cdf_with(s.gamma_th, &s.profiles, s.p_a, &s.ostbc, s.zeta_method)
}

/// Outage limit as the interference cap grows without bound, optical hop fixed.
pub fn floor_pa_infinity(s: &ScenarioConfig) -> Result<f64> {
    s.validate()?;
    let rf = snr_star_cdf_pa_infinity(s.gamma_th, &s.profiles, &s.ostbc)?;
    let fso = snr_cdf(s.gamma_th, &s.fso)?;
    Ok(combine(rf, fso))
}
