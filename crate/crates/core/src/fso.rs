//! Málaga turbulence with zero-boresight pointing errors on the relay →
//! destination optical hop.
//!
//! The Málaga density is a finite mixture over `k = 1..=β` of Gamma-Gamma
//! densities with shapes `(α, k)` sharing the Bessel rate
//! `s = αβ / (ξβ + Ω′)`. All mixture coefficients are held in log space:
//! the Gamma-Gamma and K-distribution limits push individual factors far
//! outside the `f64` range even though their products stay moderate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{erf, ln_bessel_k, ln_gamma, meijer_g, MeijerGSpec};

/// Substitute for an exactly-zero scatter or LOS power.
///
/// With `ξ = 2b₀(1-ρ) = 0` or `Ω′ = 0` the mixture coefficients are 0/0
/// limits; the perturbation changes the density by O(ε) relative.
pub const DEGENERATE_EPS: f64 = 1e-9;

const LN_2: f64 = std::f64::consts::LN_2;

/// Málaga (ℳ) turbulence parameters and their derived mixture constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MalagaRaw")]
pub struct MalagaParams {
    pub alpha: f64,
    pub beta: u32,
    /// Scattered power not coupled to the LOS, `2b₀(1-ρ)`.
    pub xi: f64,
    pub rho: f64,
    /// Coherent power `Ω + 2ρb₀ + 2√(2b₀ρΩ) cos(φ₁-φ₂)`.
    pub omega_prime: f64,
    /// Set when [`DEGENERATE_EPS`] replaced an exact zero in `xi` or `omega_prime`.
    pub guarded: bool,
    #[serde(skip)]
    derived: Derived,
}

#[derive(Debug, Clone, PartialEq, Default)]
struct Derived {
    ln_chi: f64,
    ln_a: Vec<f64>,
    rate: f64,
    weights: Vec<f64>,
}

/// Serialized form; derived constants are recomputed on load.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MalagaRaw {
    alpha: f64,
    beta: u32,
    xi: f64,
    rho: f64,
    omega_prime: f64,
    #[serde(default)]
    guarded: bool,
}

impl TryFrom<MalagaRaw> for MalagaParams {
    type Error = Error;

    fn try_from(r: MalagaRaw) -> Result<Self> {
        let mut p = MalagaParams::from_reduced(r.alpha, f64::from(r.beta), r.xi, r.rho, r.omega_prime)?;
        p.guarded |= r.guarded;
        Ok(p)
    }
}

fn check_alpha_beta(alpha: f64, beta: f64) -> Result<u32> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::param("alpha", format!("must be positive, got {alpha}")));
    }
    if !(beta.is_finite() && beta >= 1.0 && beta.fract() == 0.0 && beta <= 1e6) {
        return Err(Error::param("beta", format!("must be a natural number, got {beta}")));
    }
    Ok(beta as u32)
}

impl MalagaParams {
    /// From the physical description: scatter power `2b₀ = 2·b0`, coupling
    /// `rho`, LOS power `omega` and the LOS/coupled phase difference.
    pub fn derive(alpha: f64, beta: f64, b0: f64, rho: f64, omega: f64, phase_diff: f64) -> Result<Self> {
        if !(b0.is_finite() && b0 >= 0.0) {
            return Err(Error::param("b0", format!("must be non-negative, got {b0}")));
        }
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::param("omega", format!("must be non-negative, got {omega}")));
        }
        if !phase_diff.is_finite() {
            return Err(Error::param("phase_diff", "must be finite"));
        }
        check_rho(rho)?;
        let xi = 2.0 * b0 * (1.0 - rho);
        let omega_prime = omega + 2.0 * rho * b0 + 2.0 * (2.0 * b0 * rho * omega).sqrt() * phase_diff.cos();
        if omega_prime < 0.0 {
            return Err(Error::param("omega_prime", format!("derived coherent power is negative ({omega_prime})")));
        }
        Self::from_reduced(alpha, beta, xi, rho, omega_prime)
    }

    /// From the reduced parameter set `(α, β, ξ, ρ, Ω′)` used to describe channels directly.
    pub fn from_reduced(alpha: f64, beta: f64, xi: f64, rho: f64, omega_prime: f64) -> Result<Self> {
        let beta = check_alpha_beta(alpha, beta)?;
        check_rho(rho)?;
        if !(xi.is_finite() && xi >= 0.0) {
            return Err(Error::param("xi", format!("must be non-negative, got {xi}")));
        }
        if !(omega_prime.is_finite() && omega_prime >= 0.0) {
            return Err(Error::param("omega_prime", format!("must be non-negative, got {omega_prime}")));
        }
        if xi == 0.0 && omega_prime == 0.0 {
            return Err(Error::param("omega_prime", "xi and omega_prime cannot both vanish"));
        }
        let guarded = xi == 0.0 || omega_prime == 0.0;
        let xi = if xi == 0.0 { DEGENERATE_EPS } else { xi };
        let omega_prime = if omega_prime == 0.0 { DEGENERATE_EPS } else { omega_prime };
        let mut p = MalagaParams { alpha, beta, xi, rho, omega_prime, guarded, derived: Derived::default() };
        p.derived = p.compute_derived()?;
        Ok(p)
    }

    fn compute_derived(&self) -> Result<Derived> {
        let (alpha, xi, om) = (self.alpha, self.xi, self.omega_prime);
        let beta = f64::from(self.beta);
        let spread = xi * beta + om;
        let ln_gamma_alpha = ln_gamma(alpha)?;
        let ln_chi = LN_2 + 0.5 * alpha * alpha.ln() - (1.0 + 0.5 * alpha) * xi.ln() - ln_gamma_alpha
            + (beta + 0.5 * alpha) * ((xi * beta).ln() - spread.ln());
        let mut ln_a = Vec::with_capacity(self.beta as usize);
        for k in 1..=self.beta {
            let kf = f64::from(k);
            let ln_binom = ln_gamma(beta)? - ln_gamma(kf)? - ln_gamma(beta - kf + 1.0)?;
            ln_a.push(
                ln_binom + (1.0 - 0.5 * kf) * spread.ln() - ln_gamma(kf)?
                    + (kf - 1.0) * (om.ln() - xi.ln())
                    + 0.5 * kf * (alpha.ln() - beta.ln()),
            );
        }
        let rate = alpha * beta / spread;
        let mut weights = Vec::with_capacity(ln_a.len());
        for (i, la) in ln_a.iter().enumerate() {
            let kf = (i + 1) as f64;
            let ln_b = la - 0.5 * (alpha + kf) * rate.ln();
            weights.push((ln_chi + ln_b + ln_gamma_alpha + ln_gamma(kf)? - LN_2).exp());
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::numerical(
                "derive_malaga_constants",
                format!("mixture weights sum to {total}, expected 1"),
            ));
        }
        Ok(Derived { ln_chi, ln_a, rate, weights })
    }

    pub fn ln_chi(&self) -> f64 {
        self.derived.ln_chi
    }

    pub fn chi(&self) -> f64 {
        self.derived.ln_chi.exp()
    }

    /// `ln a(k)` for `k = 1..=β`.
    pub fn ln_a(&self, k: u32) -> f64 {
        self.derived.ln_a[(k - 1) as usize]
    }

    /// `ln b_k = ln a(k) - (α+k)/2 · ln s`.
    pub fn ln_b(&self, k: u32) -> f64 {
        self.ln_a(k) - 0.5 * (self.alpha + f64::from(k)) * self.derived.rate.ln()
    }

    /// Bessel rate `s = αβ / (ξβ + Ω′)` shared by every mixture component.
    pub fn rate(&self) -> f64 {
        self.derived.rate
    }

    /// Probabilities of the Gamma-Gamma mixture components `k = 1..=β`.
    pub fn weights(&self) -> &[f64] {
        &self.derived.weights
    }

    /// `E[h_a] = ξ + Ω′`.
    pub fn mean(&self) -> f64 {
        self.xi + self.omega_prime
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::param("rho", format!("coupling factor must lie in [0, 1], got {rho}")));
    }
    Ok(())
}

/// Named members of the Málaga family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecialCase {
    /// `ρ = 1`, `Ω′ = 1`, `ξ = 0`: unit-mean Gamma-Gamma.
    GammaGamma,
    /// `ρ = 0`, `Ω′ = 0`: K-distribution with scatter power `xi`.
    KDistribution { xi: f64 },
}

pub fn special_case_params(kind: SpecialCase, alpha: f64, beta: f64) -> Result<MalagaParams> {
    match kind {
        SpecialCase::GammaGamma => MalagaParams::from_reduced(alpha, beta, 0.0, 1.0, 1.0),
        SpecialCase::KDistribution { xi } => MalagaParams::from_reduced(alpha, beta, xi, 0.0, 0.0),
    }
}

/// Density of the turbulence-induced irradiance `h_a`.
pub fn turbulence_pdf(h: f64, p: &MalagaParams) -> Result<f64> {
    if h.is_nan() || h < 0.0 {
        return Err(Error::domain("turbulence_pdf", format!("irradiance must be non-negative, got {h}")));
    }
    if h == 0.0 || h.is_infinite() {
        // Each term behaves like h^{min(α,k)-1} near zero.
        return if h == 0.0 && p.alpha.min(1.0) < 1.0 {
            Err(Error::range("turbulence_pdf", "density is unbounded at 0 for α < 1"))
        } else if h == 0.0 && p.alpha == 1.0 {
            Err(Error::capability("turbulence_pdf", "density limit at 0 for α = 1 is not evaluated"))
        } else {
            Ok(0.0)
        };
    }
    let arg = 2.0 * (p.rate() * h).sqrt();
    let mut sum = 0.0;
    for k in 1..=p.beta {
        let kf = f64::from(k);
        let ln_term = p.ln_chi() + p.ln_a(k) + (0.5 * (p.alpha + kf) - 1.0) * h.ln() + ln_bessel_k(p.alpha - kf, arg)?;
        sum += ln_term.exp();
    }
    Ok(sum)
}

/// CDF of `h_a`: the mixture of Gamma-Gamma CDFs
/// `G^{2,1}_{1,3}(s h | 1; α, k, 0) / (Γ(α) Γ(k))`.
pub fn turbulence_cdf(h: f64, p: &MalagaParams) -> Result<f64> {
    if h.is_nan() || h < 0.0 {
        return Err(Error::domain("turbulence_cdf", format!("irradiance must be non-negative, got {h}")));
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    if h.is_infinite() {
        return Ok(1.0);
    }
    let ln_gamma_alpha = ln_gamma(p.alpha)?;
    let mut sum = 0.0;
    for (i, w) in p.weights().iter().enumerate() {
        let k = (i + 1) as f64;
        let spec = MeijerGSpec::new(2, 1, vec![1.0], vec![p.alpha, k, 0.0])?;
        sum += w * meijer_g(&spec, p.rate() * h)? * (-ln_gamma_alpha - ln_gamma(k)?).exp();
    }
    Ok(sum.clamp(0.0, 1.0))
}

/// Zero-boresight pointing-error parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointingParams {
    /// Equivalent beam width over jitter standard deviation.
    pub zeta: f64,
    /// Fraction of power collected at zero displacement, `A₀ = erf(v)²`.
    pub a0: f64,
}

impl PointingParams {
    pub fn new(zeta: f64, a0: f64) -> Result<Self> {
        let p = PointingParams { zeta, a0 };
        p.validate()?;
        Ok(p)
    }

    /// `A₀` from the aperture radius and beam waist (same units):
    /// `v = √π a / (√2 w_z)`, `A₀ = erf(v)²`.
    pub fn from_geometry(zeta: f64, aperture_radius: f64, beam_waist: f64) -> Result<Self> {
        if !(aperture_radius.is_finite() && aperture_radius > 0.0) {
            return Err(Error::param("aperture_radius", format!("must be positive, got {aperture_radius}")));
        }
        if !(beam_waist.is_finite() && beam_waist > 0.0) {
            return Err(Error::param("beam_waist", format!("must be positive, got {beam_waist}")));
        }
        let v = std::f64::consts::PI.sqrt() * aperture_radius / (std::f64::consts::SQRT_2 * beam_waist);
        let a0 = erf(v)?.powi(2);
        Self::new(zeta, a0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.zeta.is_finite() && self.zeta > 0.0) {
            return Err(Error::param("zeta", format!("must be positive, got {}", self.zeta)));
        }
        if !(self.a0 > 0.0 && self.a0 <= 1.0) {
            return Err(Error::param("a0", format!("must lie in (0, 1], got {}", self.a0)));
        }
        Ok(())
    }

    pub fn zeta_sq(&self) -> f64 {
        self.zeta * self.zeta
    }
}

/// Density of the misalignment loss `h_m` on `[0, A₀]`.
pub fn pointing_pdf(h_m: f64, p: &PointingParams) -> f64 {
    if !(0.0..=p.a0).contains(&h_m) {
        return 0.0;
    }
    let z2 = p.zeta_sq();
    z2 / p.a0.powf(z2) * h_m.powf(z2 - 1.0)
}

/// CDF of `h_m`: `(h / A₀)^{ζ²}` on `[0, A₀]`.
pub fn pointing_cdf(h_m: f64, p: &PointingParams) -> f64 {
    if h_m <= 0.0 || h_m.is_nan() {
        0.0
    } else if h_m >= p.a0 {
        1.0
    } else {
        (h_m / p.a0).powf(p.zeta_sq())
    }
}

/// Optical detection scheme; `r` is the exponent in `γ = c·h^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detection {
    Heterodyne,
    #[serde(rename = "imdd")]
    ImDd,
}

impl Detection {
    pub fn r(self) -> u32 {
        match self {
            Detection::Heterodyne => 1,
            Detection::ImDd => 2,
        }
    }
}

/// Full description of the optical hop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FsoLinkParams {
    pub malaga: MalagaParams,
    pub pointing: PointingParams,
    pub detection: Detection,
    /// Average SNR at the destination (linear).
    pub avg_snr: f64,
}

impl FsoLinkParams {
    pub fn new(malaga: MalagaParams, pointing: PointingParams, detection: Detection, avg_snr: f64) -> Result<Self> {
        let f = FsoLinkParams { malaga, pointing, detection, avg_snr };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        self.pointing.validate()?;
        if !(self.avg_snr.is_finite() && self.avg_snr > 0.0) {
            return Err(Error::param("avg_snr", format!("must be positive and finite, got {}", self.avg_snr)));
        }
        Ok(())
    }

    pub fn r(&self) -> u32 {
        self.detection.r()
    }

    /// `B = ζ²αβ(ξ+Ω′) / ((1+ζ²)(ξβ+Ω′))`.
    pub fn b_fso(&self) -> f64 {
        let m = &self.malaga;
        let z2 = self.pointing.zeta_sq();
        let beta = f64::from(m.beta);
        z2 * m.alpha * beta * (m.xi + m.omega_prime) / ((1.0 + z2) * (m.xi * beta + m.omega_prime))
    }

    /// Upper parameters after the leading 1: `(ζ²+1)/r, …, (ζ²+r)/r`.
    pub fn kappa1(&self) -> Vec<f64> {
        let r = f64::from(self.r());
        let z2 = self.pointing.zeta_sq();
        (1..=self.r()).map(|j| (z2 + f64::from(j)) / r).collect()
    }

    /// Lower parameters for mixture component `k`:
    /// `ζ²/r…(ζ²+r-1)/r, α/r…(α+r-1)/r, k/r…(k+r-1)/r`.
    pub fn kappa2(&self, k: u32) -> Vec<f64> {
        let r = f64::from(self.r());
        let z2 = self.pointing.zeta_sq();
        let alpha = self.malaga.alpha;
        let kf = f64::from(k);
        [z2, alpha, kf]
            .iter()
            .flat_map(|&base| (0..self.r()).map(move |j| (base + f64::from(j)) / r))
            .collect()
    }
}

/// Density of the composite channel `h = h_a·h_m`.
pub fn channel_pdf(h: f64, fso: &FsoLinkParams) -> Result<f64> {
    composite_pdf(h, &fso.malaga, &fso.pointing)
}

/// [`channel_pdf`] without the detection/SNR fields.
pub fn composite_pdf(h: f64, m: &MalagaParams, pt: &PointingParams) -> Result<f64> {
    pt.validate()?;
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::domain("channel_pdf", format!("channel gain must be positive and finite, got {h}")));
    }
    let z2 = pt.zeta_sq();
    let arg = m.rate() * h / pt.a0;
    let mut sum = 0.0;
    for k in 1..=m.beta {
        let spec = MeijerGSpec::new(3, 0, vec![z2 + 1.0], vec![z2, m.alpha, f64::from(k)])?;
        let g = meijer_g(&spec, arg)?;
        sum += (z2.ln() + m.ln_chi() + m.ln_b(k) - LN_2 - h.ln()).exp() * g;
    }
    Ok(sum.max(0.0))
}

/// CDF of the instantaneous destination SNR.
pub fn snr_cdf(x: f64, fso: &FsoLinkParams) -> Result<f64> {
    fso.validate()?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain("snr_cdf", format!("SNR must be non-negative, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let m = &fso.malaga;
    let r = fso.r();
    let rf = f64::from(r);
    let z2 = fso.pointing.zeta_sq();
    let arg = fso.b_fso().powi(r as i32) * x / (rf.powi(2 * r as i32) * fso.avg_snr);
    let mut upper = vec![1.0];
    upper.extend(fso.kappa1());
    let ln_front = z2.ln() + m.ln_chi() - rf * LN_2 - (rf - 1.0) * (2.0 * std::f64::consts::PI).ln();
    let mut sum = 0.0;
    for k in 1..=m.beta {
        let mut lower = fso.kappa2(k);
        lower.push(0.0);
        let spec = MeijerGSpec::new(3 * r as usize, 1, upper.clone(), lower)?;
        let g = meijer_g(&spec, arg)?;
        sum += (ln_front + m.ln_b(k) + (m.alpha + f64::from(k) - 1.0) * rf.ln()).exp() * g;
    }
    Ok(sum.clamp(0.0, 1.0))
}

/// Constant `c` with `γ_RD = c·h^r` reproducing the configured average SNR.
pub fn average_snr_scale(fso: &FsoLinkParams) -> f64 {
    let z2 = fso.pointing.zeta_sq();
    let r = fso.r() as i32;
    fso.avg_snr * (1.0 + z2).powi(r) / (fso.pointing.a0 * z2 * fso.malaga.mean()).powi(r)
}
