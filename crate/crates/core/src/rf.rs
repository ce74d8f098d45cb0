//! Statistics of the secondary-user RF hop.
//!
//! Every SU-TX → relay and SU-TX → PU-RX MIMO channel has i.i.d.
//! Nakagami-m entries, so its squared Frobenius norm is Gamma distributed
//! with shape `m·N_tx·N_rx` and scale `δ²/m`. The selected user maximizes
//! `min{P_M G_SR, P_A G_SR / G_SP}` (the received power under the underlay
//! power policy); the CDF of that per-user quantity has a closed form when
//! the S→R shape is an integer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate_try, Tolerance};
use crate::specfun::{gamma_p, ln_factorial, ln_gamma, ln_gamma_q};

/// Nakagami-m MIMO link: severity, per-entry variance and antenna counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfLinkParams {
    pub m: f64,
    pub var: f64,
    pub tx_antennas: u32,
    pub rx_antennas: u32,
}

impl RfLinkParams {
    pub fn new(m: f64, var: f64, tx_antennas: u32, rx_antennas: u32) -> Result<Self> {
        let link = RfLinkParams { m, var, tx_antennas, rx_antennas };
        link.validate()?;
        Ok(link)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m.is_finite() && self.m >= 0.5) {
            return Err(Error::param("m", format!("Nakagami severity must be >= 0.5, got {}", self.m)));
        }
        if !(self.var.is_finite() && self.var > 0.0) {
            return Err(Error::param("var", format!("channel variance must be positive, got {}", self.var)));
        }
        if self.tx_antennas == 0 || self.rx_antennas == 0 {
            return Err(Error::param("antennas", "antenna counts must be positive"));
        }
        Ok(())
    }

    /// Gamma shape of the squared Frobenius norm, `m·N_tx·N_rx`.
    pub fn shape(&self) -> f64 {
        self.m * f64::from(self.tx_antennas) * f64::from(self.rx_antennas)
    }

    /// Gamma scale of the squared Frobenius norm, `δ²/m`.
    pub fn scale(&self) -> f64 {
        self.var / self.m
    }

    /// The shape as an integer, if it is one (to within 1e-9).
    pub fn integer_shape(&self) -> Option<u32> {
        let s = self.shape();
        let r = s.round();
        ((s - r).abs() <= 1e-9 && r >= 1.0 && r <= f64::from(u32::MAX)).then_some(r as u32)
    }
}

/// One secondary transmitter: its link to the relay, its cross link to the
/// primary receiver and its power budget (watts).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuTxProfile {
    pub sr: RfLinkParams,
    pub sp: RfLinkParams,
    pub max_power: f64,
}

impl SuTxProfile {
    pub fn new(sr: RfLinkParams, sp: RfLinkParams, max_power: f64) -> Result<Self> {
        let profile = SuTxProfile { sr, sp, max_power };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        self.sr.validate()?;
        self.sp.validate()?;
        if self.sr.tx_antennas != self.sp.tx_antennas {
            return Err(Error::param(
                "tx_antennas",
                format!(
                    "S→R and S→PU links must share the SU-TX antennas ({} vs {})",
                    self.sr.tx_antennas, self.sp.tx_antennas
                ),
            ));
        }
        if !(self.max_power.is_finite() && self.max_power > 0.0) {
            return Err(Error::param("max_power", format!("must be positive, got {}", self.max_power)));
        }
        Ok(())
    }
}

/// OSTBC block description: `B` symbols over `T` channel uses, noise power η₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OstbcParams {
    pub block_symbols: u32,
    pub block_length: u32,
    pub noise_power: f64,
}

impl OstbcParams {
    pub fn new(block_symbols: u32, block_length: u32, noise_power: f64) -> Result<Self> {
        let p = OstbcParams { block_symbols, block_length, noise_power };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_symbols == 0 || self.block_length == 0 || self.block_symbols > self.block_length {
            return Err(Error::param(
                "rate",
                format!("need 0 < B <= T, got B={} T={}", self.block_symbols, self.block_length),
            ));
        }
        if !(self.noise_power.is_finite() && self.noise_power > 0.0) {
            return Err(Error::param("noise_power", format!("must be positive, got {}", self.noise_power)));
        }
        Ok(())
    }

    /// Code rate `R_c = B / T`.
    pub fn rate(&self) -> f64 {
        f64::from(self.block_symbols) / f64::from(self.block_length)
    }
}

/// How the per-user metric CDF is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMethod {
    /// Finite-sum closed form; requires an integer S→R shape.
    #[default]
    ClosedForm,
    /// Closed form when possible, otherwise adaptive quadrature.
    Auto,
    /// Always integrate numerically.
    Quadrature,
}

fn check_x(func: &'static str, x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(func, format!("argument must be non-negative, got {x}")));
    }
    Ok(())
}

fn check_power(field: &'static str, p: f64) -> Result<()> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::param(field, format!("must be positive and finite, got {p}")));
    }
    Ok(())
}

/// CDF of the squared Frobenius norm of a link.
pub fn gain_cdf(x: f64, link: &RfLinkParams) -> Result<f64> {
    link.validate()?;
    check_x("gain_cdf", x)?;
    gamma_p(link.shape(), x / link.scale())
}

/// Density of the squared Frobenius norm of a link.
pub fn gain_pdf(x: f64, link: &RfLinkParams) -> Result<f64> {
    link.validate()?;
    check_x("gain_pdf", x)?;
    let (k, theta) = (link.shape(), link.scale());
    if x == 0.0 {
        return if k > 1.0 {
            Ok(0.0)
        } else if k == 1.0 {
            Ok(1.0 / theta)
        } else {
            Err(Error::range("gain_pdf", "density is unbounded at 0 for shape < 1"))
        };
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    Ok(((k - 1.0) * x.ln() - x / theta - k * theta.ln() - ln_gamma(k)?).exp())
}

/// Underlay transmit power `min{P_M, P_A / G_SP}`.
pub fn transmit_power(gain_sp: f64, p_max: f64, p_a: f64) -> Result<f64> {
    check_power("max_power", p_max)?;
    check_power("p_a", p_a)?;
    if gain_sp.is_nan() || gain_sp < 0.0 {
        return Err(Error::domain("transmit_power", format!("gain must be non-negative, got {gain_sp}")));
    }
    if gain_sp == 0.0 {
        return Ok(p_max);
    }
    Ok(p_max.min(p_a / gain_sp))
}

/// Received-power selection metric of one user, `min{P_M G_SR, P_A G_SR / G_SP}`.
#[inline]
pub fn selection_metric(gain_sr: f64, gain_sp: f64, p_max: f64, p_a: f64) -> f64 {
    let capped = p_max * gain_sr;
    if gain_sp == 0.0 {
        capped
    } else {
        capped.min(p_a * gain_sr / gain_sp)
    }
}

/// CDF of the per-user metric, finite-sum closed form.
///
/// Needs an integer S→R shape; otherwise returns a capability error (use
/// [`zeta_cdf_with`] and [`ZetaMethod::Auto`] for the quadrature fallback).
pub fn zeta_cdf(x: f64, profile: &SuTxProfile, p_a: f64) -> Result<f64> {
    zeta_cdf_with(x, profile, p_a, ZetaMethod::ClosedForm)
}

pub fn zeta_cdf_with(x: f64, profile: &SuTxProfile, p_a: f64, method: ZetaMethod) -> Result<f64> {
    profile.validate()?;
    check_power("p_a", p_a)?;
    check_x("zeta_cdf", x)?;
    if x.is_infinite() {
        return Ok(1.0);
    }
    match (method, profile.sr.integer_shape()) {
        (ZetaMethod::ClosedForm | ZetaMethod::Auto, Some(n)) => zeta_closed_form(x, profile, p_a, n),
        (ZetaMethod::ClosedForm, None) => Err(Error::capability(
            "zeta_cdf",
            format!(
                "closed form needs an integer S→R shape m·N_S·N_R, got {}; enable the quadrature fallback",
                profile.sr.shape()
            ),
        )),
        (ZetaMethod::Auto | ZetaMethod::Quadrature, _) => zeta_cdf_quadrature(x, profile, p_a),
    }
}

fn zeta_closed_form(x: f64, profile: &SuTxProfile, p_a: f64, tau1: u32) -> Result<f64> {
    let (sr, sp, p_m) = (&profile.sr, &profile.sp, profile.max_power);
    let tau2 = sp.shape();
    let u = x / (p_m * sr.scale());
    let v = p_a / (p_m * sp.scale());
    let y = x * sp.scale() / (p_a * sr.scale());

    let both_capped = gamma_p(f64::from(tau1), u)? * gamma_p(tau2, v)?;
    let ln_q_v = ln_gamma_q(tau2, v)?;

    // I = Q(τ₂, v) - Σ_{l<τ₁} t_l with t_l = y^l/l! (1+y)^{-τ₂-l} Γ(τ₂+l, v(1+y)) / Γ(τ₂).
    // The same I equals the positive tail Σ_{l≥τ₁} t_l, used when y ≤ 1 where
    // the finite difference cancels and the tail converges geometrically.
    let ln_1py = y.ln_1p();
    let ln_y = y.ln();
    let ln_gamma_tau2 = ln_gamma(tau2)?;
    let ln_t = |l: u32| -> Result<f64> {
        let lf = f64::from(l);
        let power = if l == 0 { 0.0 } else { lf * ln_y };
        Ok(power - ln_factorial(l) - (tau2 + lf) * ln_1py + ln_gamma(tau2 + lf)? - ln_gamma_tau2
            + ln_gamma_q(tau2 + lf, v * (1.0 + y))?)
    };
    let integral = if y <= 1.0 {
        let mut sum = 0.0;
        let mut l = tau1;
        loop {
            let t = ln_t(l)?.exp();
            sum += t;
            if t <= 1e-17 * sum || (sum == 0.0 && l > tau1 + 64) {
                break sum;
            }
            l += 1;
            if l > tau1 + 20_000 {
                return Err(Error::numerical("zeta_cdf", format!("tail series did not converge at x={x}")));
            }
        }
    } else {
        let mut sum = 0.0;
        for l in 0..tau1 {
            sum += ln_t(l)?.exp();
        }
        ln_q_v.exp() - sum
    };
    let f = both_capped + integral;
    if !f.is_finite() {
        return Err(Error::numerical("zeta_cdf", format!("non-finite CDF value at x={x}")));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// CDF of the per-user metric by adaptive quadrature over `G_SP`; valid for any shapes.
pub fn zeta_cdf_quadrature(x: f64, profile: &SuTxProfile, p_a: f64) -> Result<f64> {
    profile.validate()?;
    check_power("p_a", p_a)?;
    check_x("zeta_cdf", x)?;
    if x.is_infinite() {
        return Ok(1.0);
    }
    let (sr, sp, p_m) = (&profile.sr, &profile.sp, profile.max_power);
    let knee = p_a / p_m;
    let head = gain_cdf(x / p_m, sr)? * gain_cdf(knee, sp)?;
    let spread = sp.shape() * sp.scale();
    // z = knee + spread·u/(1-u) over u ∈ [0, 1)
    let tail = integrate_try(
        |u| {
            let w = 1.0 - u;
            let z = knee + spread * u / w;
            let dens = gain_pdf(z, sp)?;
            if dens == 0.0 {
                return Ok(0.0);
            }
            Ok(gain_cdf(x * z / p_a, sr)? * dens * spread / (w * w))
        },
        0.0,
        1.0,
        Tolerance::new(1e-13, 1e-11),
    )?;
    Ok((head + tail.value).clamp(0.0, 1.0))
}

/// CDF of the selection metric `β*` (maximum over users).
pub fn beta_star_cdf(x: f64, profiles: &[SuTxProfile], p_a: f64) -> Result<f64> {
    beta_star_cdf_with(x, profiles, p_a, ZetaMethod::ClosedForm)
}

pub fn beta_star_cdf_with(x: f64, profiles: &[SuTxProfile], p_a: f64, method: ZetaMethod) -> Result<f64> {
    if profiles.is_empty() {
        return Err(Error::param("profiles", "at least one SU-TX is required"));
    }
    profiles.iter().try_fold(1.0, |acc, p| Ok(acc * zeta_cdf_with(x, p, p_a, method)?))
}

fn common_tx_antennas(profiles: &[SuTxProfile]) -> Result<u32> {
    let first = profiles.first().ok_or_else(|| Error::param("profiles", "at least one SU-TX is required"))?;
    let n_s = first.sr.tx_antennas;
    if profiles.iter().any(|p| p.sr.tx_antennas != n_s) {
        return Err(Error::param("tx_antennas", "all SU-TXs must use the same number of antennas"));
    }
    Ok(n_s)
}

/// Scale that maps an SNR threshold to a metric threshold, `R_c N_S η₀`.
pub fn snr_to_metric(profiles: &[SuTxProfile], ostbc: &OstbcParams) -> Result<f64> {
    ostbc.validate()?;
    Ok(ostbc.rate() * f64::from(common_tx_antennas(profiles)?) * ostbc.noise_power)
}

/// CDF of the post-selection per-symbol SNR at the relay.
pub fn snr_star_cdf(gamma: f64, profiles: &[SuTxProfile], p_a: f64, ostbc: &OstbcParams) -> Result<f64> {
    snr_star_cdf_with(gamma, profiles, p_a, ostbc, ZetaMethod::ClosedForm)
}

pub fn snr_star_cdf_with(
    gamma: f64,
    profiles: &[SuTxProfile],
    p_a: f64,
    ostbc: &OstbcParams,
    method: ZetaMethod,
) -> Result<f64> {
    check_x("snr_star_cdf", gamma)?;
    let k = snr_to_metric(profiles, ostbc)?;
    beta_star_cdf_with(k * gamma, profiles, p_a, method)
}

/// Limit of [`snr_star_cdf`] as the interference cap `P_A` grows without bound:
/// every user then transmits at `P_M`.
pub fn snr_star_cdf_pa_infinity(gamma: f64, profiles: &[SuTxProfile], ostbc: &OstbcParams) -> Result<f64> {
    check_x("snr_star_cdf_pa_infinity", gamma)?;
    let k = snr_to_metric(profiles, ostbc)?;
    profiles.iter().try_fold(1.0, |acc, p| {
        p.validate()?;
        Ok(acc * gamma_p(p.sr.shape(), k * gamma / (p.max_power * p.sr.scale()))?)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(m: f64, var: f64, ns: u32, n: u32) -> RfLinkParams {
        RfLinkParams::new(m, var, ns, n).unwrap()
    }

    fn defaults(m: f64) -> SuTxProfile {
        SuTxProfile::new(link(m, 1.0, 3, 2), link(m, 1.0, 3, 2), 10f64.powf(2.7)).unwrap()
    }

    #[test]
    fn exponential_gain() {
        let l = link(1.0, 1.0, 1, 1);
        assert!((gain_cdf(2.0, &l).unwrap() - (1.0 - (-2.0f64).exp())).abs() < 1e-15);
        assert_eq!(gain_cdf(0.0, &l).unwrap(), 0.0);
        assert!((gain_pdf(0.5, &l).unwrap() - (-0.5f64).exp()).abs() < 1e-14);
    }

    #[test]
    fn power_policy() {
        assert_eq!(transmit_power(0.1, 10.0, 2.0).unwrap(), 10.0);
        assert_eq!(transmit_power(1.0, 10.0, 2.0).unwrap(), 2.0);
        assert!((transmit_power(4.0, 501.19, 100.0).unwrap() - 25.0).abs() < 1e-12);
        assert_eq!(transmit_power(0.0, 10.0, 2.0).unwrap(), 10.0);
        assert!(transmit_power(1.0, 0.0, 2.0).is_err());
        assert!(transmit_power(-1.0, 1.0, 2.0).is_err());
    }

    #[test]
    fn zeta_cdf_at_zero_vanishes() {
        let p = defaults(1.5);
        for &pa in &[1.0, 10.0, 1e3] {
            assert!(zeta_cdf(0.0, &p, pa).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn zeta_closed_form_matches_quadrature() {
        for &m in &[1.5, 2.5] {
            let p = defaults(m);
            for &pa in &[1.0, 10.0, 100.0, 1e4] {
                for &x in &[0.5, 5.0, 30.0, 200.0, 2000.0] {
                    let a = zeta_cdf(x, &p, pa).unwrap();
                    let b = zeta_cdf_quadrature(x, &p, pa).unwrap();
                    assert!((a - b).abs() < 1e-10, "m={m} pa={pa} x={x}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn non_integer_shape_needs_fallback() {
        let p = SuTxProfile::new(link(1.3, 1.0, 3, 2), link(1.3, 1.0, 3, 2), 100.0).unwrap();
        assert!(matches!(zeta_cdf(1.0, &p, 10.0), Err(Error::Capability { .. })));
        let v = zeta_cdf_with(1.0, &p, 10.0, ZetaMethod::Auto).unwrap();
        assert!(v > 0.0 && v < 1.0);
    }

    #[test]
    fn mismatched_antennas_rejected() {
        let err = SuTxProfile::new(link(1.0, 1.0, 3, 2), link(1.0, 1.0, 2, 2), 1.0).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "tx_antennas", .. }));
    }

    #[test]
    fn ostbc_rate_bounds() {
        assert_eq!(OstbcParams::new(4, 8, 1.0).unwrap().rate(), 0.5);
        assert!(OstbcParams::new(3, 2, 1.0).is_err());
        assert!(OstbcParams::new(1, 1, 0.0).is_err());
    }

    #[test]
    fn empty_profile_list() {
        assert!(beta_star_cdf(1.0, &[], 1.0).is_err());
    }
}
