use crate::{Error, Result};

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain(
            "log_gamma",
            format!("x = {x} must be positive and finite"),
        ));
    }
    Ok(ln_gamma(x))
}

/// Unchecked `ln Γ(x)` for internal use where `x > 0` is already guaranteed.
#[inline]
pub(crate) fn ln_gamma(x: f64) -> f64 {
    libm::lgamma_r(x).0
}

/// `ln B(a, b)` for `a, b > 0`.
#[inline]
pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Log of the beta function with domain checks.
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain("log_beta", format!("a = {a}, b = {b} must be positive")));
    }
    Ok(ln_beta(a, b))
}

// Asymptotic expansion is used from here upwards; smaller arguments are
// shifted up with the recurrence ψ(x) = ψ(x + 1) − 1/x.
const DIGAMMA_ASYMPTOTIC_MIN: f64 = 10.0;

// B_{2n} / (2n) for n = 1..7.
const DIGAMMA_SERIES: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

/// The digamma function `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain("digamma", format!("x = {x} must be positive and finite")));
    }
    Ok(psi(x))
}

pub(crate) fn psi(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < DIGAMMA_ASYMPTOTIC_MIN {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut poly = 0.0;
    for c in DIGAMMA_SERIES.iter().rev() {
        poly = (poly + c) * inv2;
    }
    shift + x.ln() - 0.5 / x - poly
}

// Terms summed explicitly before the Euler-Maclaurin tail takes over.
const DIGAMMA_DIFF_TERMS: usize = 64;

/// `ψ(ξ₁) − ψ(ξ₂)` from the series `Σ_{i≥0} (ξ₁ − ξ₂) / ((i + ξ₁)(i + ξ₂))`.
///
/// The first terms are summed directly and the remainder is replaced by its
/// Euler-Maclaurin expansion, whose error is `O(M^-7)` for cut-off `M`.
pub fn digamma_diff(xi1: f64, xi2: f64) -> Result<f64> {
    if !(xi1 > 0.0 && xi2 > 0.0 && xi1.is_finite() && xi2.is_finite()) {
        return Err(Error::domain(
            "digamma_diff",
            format!("xi1 = {xi1}, xi2 = {xi2} must be positive"),
        ));
    }
    if xi1 == xi2 {
        return Ok(0.0);
    }
    let d = xi1 - xi2;
    let term = |i: f64| d / ((i + xi1) * (i + xi2));
    let mut head = 0.0;
    // Smallest terms first keeps the rounding error at the level of the result.
    for i in (0..DIGAMMA_DIFF_TERMS).rev() {
        head += term(i as f64);
    }
    Ok(head + series_tail(xi1, xi2, DIGAMMA_DIFF_TERMS as f64))
}

/// `Σ_{i≥m} [1/(i+b) − 1/(i+a)]` via Euler-Maclaurin with three derivative terms.
fn series_tail(a: f64, b: f64, m: f64) -> f64 {
    // f(x) = 1/(x+b) − 1/(x+a); f^(k)(x) = (−1)^k k! [(x+b)^-(k+1) − (x+a)^-(k+1)]
    let (xa, xb) = (m + a, m + b);
    let integral = (xa / xb).ln();
    let f0 = 1.0 / xb - 1.0 / xa;
    let f1 = -(xb.powi(-2) - xa.powi(-2));
    let f3 = -6.0 * (xb.powi(-4) - xa.powi(-4));
    let f5 = -120.0 * (xb.powi(-6) - xa.powi(-6));
    integral + 0.5 * f0 - f1 / 12.0 + f3 / 720.0 - f5 / 30240.0
}
