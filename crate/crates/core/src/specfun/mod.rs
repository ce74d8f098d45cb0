//! Special functions: gamma family, error function, Bessel K and Meijer G.
//!
//! All routines are pure `f64` functions and safe to call from any thread.

mod bessel;
mod erf;
mod gamma;
mod incgamma;
mod meijer;

pub use bessel::{bessel_k, bessel_k_scaled, ln_bessel_k};
pub use erf::erf;
pub use gamma::{gamma, ln_gamma, ln_gamma_complex};
pub(crate) use gamma::ln_factorial;
pub use incgamma::{gamma_p, gamma_q, ln_gamma_q, ln_upper_inc_gamma, lower_inc_gamma, upper_inc_gamma};
pub use meijer::{meijer_g, meijer_g_on_line, meijer_g_with_error, MeijerGSpec, MeijerGValue};
