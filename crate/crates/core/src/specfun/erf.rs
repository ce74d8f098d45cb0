use crate::error::{Error, Result};

/// Error function. `±∞` map to `±1`; NaN is a domain error.
pub fn erf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("erf", "argument is NaN"));
    }
    if x.is_infinite() {
        return Ok(x.signum());
    }
    Ok(libm::erf(x))
}
