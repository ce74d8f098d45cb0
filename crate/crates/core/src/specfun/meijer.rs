//! Meijer G-function by direct Mellin–Barnes contour integration.
//!
//! ```text
//! G^{m,n}_{p,q}(x | a; b) = 1/(2πi) ∫_L  Π_{j<m} Γ(b_j - s) Π_{j<n} Γ(1 - a_j + s)
//!                                        ─────────────────────────────────────────── x^s ds
//!                                        Π_{j≥m} Γ(1 - b_j + s) Π_{j≥n} Γ(a_j - s)
//! ```
//!
//! `L` is the vertical line `Re s = c` separating the poles of `Γ(b_j - s)`
//! (right) from those of `Γ(1 - a_j + s)` (left). Coincident or
//! integer-spaced poles need no special handling. The line is placed at the
//! minimum of the integrand modulus on the real axis, which is the saddle of
//! the integrand and keeps cancellation along the line small. The integrand
//! is conjugate-symmetric in `Im s`, so only `t >= 0` is integrated.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::gamma::ln_gamma_complex;
use crate::error::{Error, Result};
use crate::quad::{integrate, Tolerance};

/// Order and parameter block of `G^{m,n}_{p,q}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeijerGSpec {
    pub m: usize,
    pub n: usize,
    /// Upper parameters, `p` of them.
    pub a: Vec<f64>,
    /// Lower parameters, `q` of them.
    pub b: Vec<f64>,
}

impl MeijerGSpec {
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if m > b.len() || n > a.len() {
            return Err(Error::domain(
                "meijer_g",
                format!("orders m={m}, n={n} exceed parameter counts q={}, p={}", b.len(), a.len()),
            ));
        }
        if a.len() > b.len() {
            return Err(Error::domain("meijer_g", "p must not exceed q"));
        }
        if a.iter().chain(&b).any(|v| !v.is_finite()) {
            return Err(Error::domain("meijer_g", "parameters must be finite"));
        }
        Ok(MeijerGSpec { m, n, a, b })
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    /// Open interval of admissible contour abscissae.
    fn strip(&self) -> (f64, f64) {
        let lo = self.a[..self.n].iter().map(|a| a - 1.0).fold(f64::NEG_INFINITY, f64::max);
        let hi = self.b[..self.m].iter().copied().fold(f64::INFINITY, f64::min);
        (lo, hi)
    }

    fn check_supported(&self) -> Result<()> {
        let (p, q) = (self.p(), self.q());
        if p >= q {
            return Err(Error::capability("meijer_g", format!("only p < q is supported, got p={p}, q={q}")));
        }
        if 2 * (self.m + self.n) <= p + q {
            return Err(Error::capability(
                "meijer_g",
                format!(
                    "vertical contour diverges unless 2(m+n) > p+q (m={}, n={}, p={p}, q={q})",
                    self.m, self.n
                ),
            ));
        }
        let (lo, hi) = self.strip();
        if lo >= hi {
            return Err(Error::capability(
                "meijer_g",
                format!("pole families overlap (max a_j - 1 = {lo} >= min b_j = {hi}); no separating line"),
            ));
        }
        Ok(())
    }

    /// ln of the Mellin–Barnes integrand without the `x^s` factor.
    fn ln_kernel(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &b) in self.b.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_complex(b - s);
            } else {
                acc -= ln_gamma_complex(1.0 - b + s);
            }
        }
        for (j, &a) in self.a.iter().enumerate() {
            if j < self.n {
                acc += ln_gamma_complex(1.0 - a + s);
            } else {
                acc -= ln_gamma_complex(a - s);
            }
        }
        acc
    }
}

/// Result of a contour evaluation with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeijerGValue {
    pub value: f64,
    pub abs_err: f64,
    /// Abscissa of the integration line.
    pub contour: f64,
}

const REL_TOL: f64 = 1e-12;
const TAIL_LOG_DROP: f64 = 42.0;

/// `G^{m,n}_{p,q}(x | a; b)` for `x > 0`.
pub fn meijer_g(spec: &MeijerGSpec, x: f64) -> Result<f64> {
    Ok(meijer_g_with_error(spec, x)?.value)
}

/// As [`meijer_g`], also returning the quadrature error estimate.
pub fn meijer_g_with_error(spec: &MeijerGSpec, x: f64) -> Result<MeijerGValue> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain("meijer_g", format!("argument must be finite and positive, got {x}")));
    }
    spec.check_supported()?;
    let ln_x = x.ln();
    let real_axis = |c: f64| spec.ln_kernel(Complex64::new(c, 0.0)).re + c * ln_x;
    let c = saddle_abscissa(spec, ln_x, &real_axis);
    contour_integral(spec, ln_x, c)
}

/// Evaluate along a caller-chosen line `Re s = c`; must lie inside the strip.
pub fn meijer_g_on_line(spec: &MeijerGSpec, x: f64, c: f64) -> Result<MeijerGValue> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain("meijer_g", format!("argument must be finite and positive, got {x}")));
    }
    spec.check_supported()?;
    let (lo, hi) = spec.strip();
    if !(c > lo && c < hi) {
        return Err(Error::domain("meijer_g", format!("contour abscissa {c} outside strip ({lo}, {hi})")));
    }
    contour_integral(spec, x.ln(), c)
}

fn saddle_abscissa(spec: &MeijerGSpec, ln_x: f64, phi: &dyn Fn(f64) -> f64) -> f64 {
    let (lo, hi) = spec.strip();
    let surplus = (spec.q() - spec.p()) as f64;
    // The saddle drifts like ±x^{1/(q-p)} for large/small x.
    let reach = 20.0 + 2.0 * (ln_x.abs() / surplus).exp().min(1e4);
    let (left, right) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let pad = ((hi - lo) * 1e-4).min(1e-3);
            (lo + pad, hi - pad)
        }
        (false, true) => (hi - reach, hi - 1e-3),
        (true, false) => (lo + 1e-3, lo + reach),
        (false, false) => (-reach, reach),
    };
    const GRID: usize = 64;
    let node = |i: usize| left + (right - left) * 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / GRID as f64).cos());
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    for i in 0..=GRID {
        let v = phi(node(i));
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    let mut a = node(best.saturating_sub(1));
    let mut b = node((best + 1).min(GRID));
    // Golden-section refinement inside the bracketing cell.
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = phi(x1);
    let mut f2 = phi(x2);
    for _ in 0..60 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = phi(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = phi(x2);
        }
        if (b - a).abs() < 1e-10 * (1.0 + a.abs()) {
            break;
        }
    }
    let c = 0.5 * (a + b);
    if phi(c) <= best_val {
        c
    } else {
        node(best)
    }
}

fn contour_integral(spec: &MeijerGSpec, ln_x: f64, c: f64) -> Result<MeijerGValue> {
    let ln_at = |t: f64| {
        let s = Complex64::new(c, t);
        spec.ln_kernel(s) + s * ln_x
    };
    let peak = ln_at(0.0).re;
    if !peak.is_finite() {
        return Err(Error::numerical("meijer_g", format!("integrand not finite on the real axis at c={c}")));
    }
    // March outward until the envelope has dropped by e^{-TAIL_LOG_DROP}.
    let mut upper = 1.0;
    let mut below = 0;
    while below < 2 {
        if ln_at(upper).re - peak < -TAIL_LOG_DROP {
            below += 1;
        } else {
            below = 0;
        }
        upper *= 1.5;
        if upper > 1e4 {
            return Err(Error::numerical(
                "meijer_g",
                format!("integrand along Re s = {c} does not decay (peak ln-modulus {peak})"),
            ));
        }
    }
    let integrand = |t: f64| {
        let z = ln_at(t) - peak;
        z.re.exp() * z.im.cos()
    };
    // Split at 1 so the near-pole structure around t = 0 gets its own panel.
    // The tail oscillates around a small remainder; asking for relative
    // accuracy on the remainder alone would chase roundoff.
    let tol = Tolerance { abs: 1e-16, rel: REL_TOL, max_intervals: 4000 };
    let split = upper.min(1.0);
    let head = integrate(integrand, 0.0, split, tol)?;
    let tail_tol = Tolerance { abs: tol.abs.max(0.1 * REL_TOL * head.value.abs()), ..tol };
    let tail = integrate(integrand, split, upper, tail_tol)?;
    let scale = peak.exp() / std::f64::consts::PI;
    if !scale.is_finite() {
        return Err(Error::range("meijer_g", format!("integrand modulus e^{peak} overflows")));
    }
    let value = (head.value + tail.value) * scale;
    let abs_err = (head.abs_err + tail.abs_err) * scale;
    if !value.is_finite() {
        return Err(Error::numerical("meijer_g", "contour integral produced a non-finite value"));
    }
    Ok(MeijerGValue { value, abs_err, contour: c })
}
