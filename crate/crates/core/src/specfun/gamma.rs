//! Log-gamma for real and complex arguments.
//!
//! Both use the Stirling series after shifting the argument to `Re z >= 15`
//! with the recurrence `ln Γ(z) = ln Γ(z + n) - Σ ln(z + k)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const SHIFT_TO: f64 = 15.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2j} / (2j (2j - 1)) for j = 1..8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

fn stirling_real(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series * inv
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain("ln_gamma", format!("argument must be finite and positive, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x >= SHIFT_TO {
        return stirling_real(x);
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < SHIFT_TO {
        prod *= shifted;
        shifted += 1.0;
    }
    stirling_real(shifted) - prod.ln()
}

/// `Γ(x)` for `x > 0`; range error once the result overflows.
pub fn gamma(x: f64) -> Result<f64> {
    let v = ln_gamma(x)?.exp();
    if v.is_infinite() {
        return Err(Error::range("gamma", format!("Γ({x}) overflows f64")));
    }
    Ok(v)
}

/// `ln Γ(z)` for complex `z` away from the non-positive integers.
///
/// The imaginary part is a branch of the logarithm, not necessarily the
/// principal one; callers only ever exponentiate sums of these values.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    let mut shifted = z;
    let mut log_prod = Complex64::new(0.0, 0.0);
    while shifted.re < SHIFT_TO {
        log_prod += shifted.ln();
        shifted += 1.0;
    }
    let inv = shifted.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    for &c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    (shifted - 0.5) * shifted.ln() - shifted + HALF_LN_2PI + series * inv - log_prod
}

/// `ln k!`, exact zero for `k <= 1`.
pub(crate) fn ln_factorial(k: u32) -> f64 {
    if k <= 1 {
        return 0.0;
    }
    if k <= 64 {
        return (2..=k).map(|i| f64::from(i).ln()).sum();
    }
    ln_gamma_unchecked(f64::from(k) + 1.0)
}
