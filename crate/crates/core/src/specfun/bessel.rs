//! Modified Bessel function of the second kind for real order.
//!
//! Temme's series for `x < 2`, Steed's continued fraction (CF2) otherwise,
//! both at the reduced order `|μ| <= 1/2`, followed by forward recurrence
//! up to the requested order. Forward recurrence is stable for `K`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;
const SERIES_LIMIT: f64 = 2.0;

/// Taylor coefficients of 1/Γ(z) = Σ_{k≥1} c_k z^k.
const RGAM: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// Temme's auxiliary values for |μ| <= 1/2:
/// (Γ₁, Γ₂, 1/Γ(1+μ), 1/Γ(1-μ)).
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let mut pow = 1.0;
    // c_k with k even feed Γ₁ (power μ^{k-2}); k odd feed Γ₂ (power μ^{k-1}).
    for (i, c) in RGAM.iter().enumerate() {
        let k = i + 1;
        if k % 2 == 1 {
            gam2 += c * pow;
        } else {
            gam1 -= c * pow;
            pow *= mu * mu;
        }
    }
    let mut plus = 0.0;
    let mut minus = 0.0;
    let mut p = 1.0;
    for (i, c) in RGAM.iter().enumerate() {
        plus += c * p;
        minus += if i % 2 == 0 { c * p } else { -c * p };
        p *= mu;
    }
    (gam1, gam2, plus, minus)
}

/// `(e^x K_μ(x), e^x K_{μ+1}(x))` at the reduced order.
fn reduced_pair(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mu2 = mu * mu;
    if x < SERIES_LIMIT {
        let half_x = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -half_x.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = half_x * half_x;
        let mut sum1 = p;
        let mut converged = false;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::numerical("bessel_k", format!("Temme series stalled at x={x}")));
        }
        let scale = x.exp();
        Ok((sum * scale, sum1 * (2.0 / x) * scale))
    } else {
        let a1 = 0.25 - mu2;
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 2..MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::numerical("bessel_k", format!("Steed continued fraction stalled at x={x}")));
        }
        h *= a1;
        let k_mu = (PI / (2.0 * x)).sqrt() / s;
        let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
        Ok((k_mu, k_mu1))
    }
}

/// `(m, e)` with `e^x K_v(x) = m·e^e`; the forward recurrence rescales so
/// that large orders at small arguments stay representable.
fn scaled_parts(v: f64, x: f64) -> Result<(f64, f64)> {
    if !v.is_finite() {
        return Err(Error::domain("bessel_k", format!("order must be finite, got {v}")));
    }
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain("bessel_k", format!("argument must be positive, got {x}")));
    }
    if x.is_infinite() {
        return Ok((0.0, 0.0));
    }
    let nu = v.abs();
    let steps = (nu + 0.5).floor();
    let mu = nu - steps;
    let (mut k0, mut k1) = reduced_pair(mu, x)?;
    let mut ln_scale = 0.0;
    let two_over_x = 2.0 / x;
    for i in 1..=(steps as u64) {
        let next = (mu + i as f64) * two_over_x * k1 + k0;
        k0 = k1;
        k1 = next;
        if k1 > 1e250 {
            k0 /= k1;
            ln_scale += k1.ln();
            k1 = 1.0;
        }
    }
    Ok((k0, ln_scale))
}

/// `e^x K_v(x)`; avoids underflow for large `x`.
pub fn bessel_k_scaled(v: f64, x: f64) -> Result<f64> {
    let (m, e) = scaled_parts(v, x)?;
    let value = m * e.exp();
    if !value.is_finite() {
        return Err(Error::range("bessel_k", format!("K_{v}({x}) overflows f64")));
    }
    Ok(value)
}

/// `K_v(x)` for real order `v` and `x > 0`.
pub fn bessel_k(v: f64, x: f64) -> Result<f64> {
    let scaled = bessel_k_scaled(v, x)?;
    Ok(scaled * (-x).exp())
}

/// `ln K_v(x)`; finite even where `K_v(x)` itself overflows.
pub fn ln_bessel_k(v: f64, x: f64) -> Result<f64> {
    let (m, e) = scaled_parts(v, x)?;
    Ok(m.ln() + e - x)
}
