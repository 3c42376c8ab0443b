use super::quad::{beta_expectation, QuadSettings};
use crate::{Error, Result};

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for `z ≤ 0`, from the
/// Euler integral
/// `F = ∫₀¹ t^{b−1}(1−t)^{c−b−1}(1 − z t)^{−a} dt / B(b, c − b)`.
///
/// Only the non-positive half line is supported: there the integrand factor
/// `(1 − z t)^{−a}` lies in `(0, 1]`.
pub fn gauss_2f1_negz(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > b) || !(a.is_finite() && c.is_finite()) {
        return Err(Error::domain(
            "gauss_2f1_negz",
            format!("need a > 0 and c > b > 0, got a = {a}, b = {b}, c = {c}"),
        ));
    }
    if z > 0.0 || !z.is_finite() {
        return Err(Error::domain(
            "gauss_2f1_negz",
            format!("z = {z} must be finite and <= 0"),
        ));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let neg_z = -z;
    beta_expectation(|t| (-a * (neg_z * t).ln_1p()).exp(), b, c - b, &QuadSettings::default())
}
