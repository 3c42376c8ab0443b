use super::gamma::ln_beta;
use crate::{Error, Result};

const CF_MAX_ITER: usize = 10_000;
const CF_EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            return Ok(h);
        }
    }
    Err(Error::Convergence {
        func: "reg_inc_beta",
        detail: format!("continued fraction at x = {x}, a = {a}, b = {b}"),
    })
}

/// `ln I_x(a, b)` given both `x` and `xc = 1 − x`.
///
/// Both tails are evaluated through the continued fraction with the
/// prefactor kept in log space, so the result keeps full relative precision
/// for `x` down to the smallest positive double.
pub(crate) fn ln_reg_inc_beta_split(x: f64, xc: f64, a: f64, b: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if xc <= 0.0 {
        return Ok(0.0);
    }
    let ln_front = a * x.ln() + b * xc.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(ln_front - a.ln() + beta_cf(x, a, b)?.ln())
    } else {
        let upper = (ln_front - b.ln() + beta_cf(xc, b, a)?.ln()).exp();
        Ok((-upper).ln_1p())
    }
}

/// `I_x(a, b)` given both `x` and `1 − x`.
pub(crate) fn reg_inc_beta_split(x: f64, xc: f64, a: f64, b: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if xc <= 0.0 {
        return Ok(1.0);
    }
    let ln_front = a * x.ln() + b * xc.ln() - ln_beta(a, b);
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok((ln_front - a.ln()).exp() * beta_cf(x, a, b)?)
    } else {
        Ok(1.0 - (ln_front - b.ln()).exp() * beta_cf(xc, b, a)?)
    }
}

fn check_shape(func: &'static str, alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::domain(
            func,
            format!("alpha = {alpha}, beta = {beta} must be positive"),
        ));
    }
    Ok(())
}

/// The regularized incomplete beta function `I_q(α, β)`, i.e. the
/// `Beta(α, β)` distribution function at `q`.
pub fn reg_inc_beta(q: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_shape("reg_inc_beta", alpha, beta)?;
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("reg_inc_beta", format!("q = {q} outside [0, 1]")));
    }
    reg_inc_beta_split(q, 1.0 - q, alpha, beta)
}

/// `ln I_q(α, β)`; equals `-inf` at `q = 0`.
pub fn ln_reg_inc_beta(q: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_shape("ln_reg_inc_beta", alpha, beta)?;
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::domain("ln_reg_inc_beta", format!("q = {q} outside [0, 1]")));
    }
    ln_reg_inc_beta_split(q, 1.0 - q, alpha, beta)
}

/// `ln[ I_q(α, β) · α B(α, β) / q^α ]` from the first three terms of
/// `₂F₁(α, 1−β; α+1; q)`. Truncation error is `O(q³)`.
pub(crate) fn small_q_log_correction(q: f64, alpha: f64, beta: f64) -> f64 {
    let c1 = alpha * (1.0 - beta) / (alpha + 1.0);
    let c2 = alpha * (1.0 - beta) * (2.0 - beta) / (2.0 * (alpha + 2.0));
    (q * (c1 + c2 * q)).ln_1p()
}

const INV_MAX_ITER: usize = 2_000;
const INV_OMEGA_TOL: f64 = 1e-12;

/// Quantile of `Beta(α, β)`: the `q` with `I_q(α, β) = ω`.
///
/// Safeguarded Newton iteration inside a bisection bracket. The returned `q`
/// satisfies `|I_q − ω| ≤ 1e-12`.
pub fn inv_reg_inc_beta(omega: f64, alpha: f64, beta: f64) -> Result<f64> {
    check_shape("inv_reg_inc_beta", alpha, beta)?;
    if !(omega > 0.0 && omega < 1.0) {
        return Err(Error::domain(
            "inv_reg_inc_beta",
            format!("omega = {omega} outside (0, 1)"),
        ));
    }
    let ln_b = ln_beta(alpha, beta);
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut q = 0.5;
    for _ in 0..INV_MAX_ITER {
        let resid = reg_inc_beta_split(q, 1.0 - q, alpha, beta)? - omega;
        if resid == 0.0 {
            return Ok(q);
        }
        if resid > 0.0 {
            hi = q;
        } else {
            lo = q;
        }
        let log_dens = (alpha - 1.0) * q.ln() + (beta - 1.0) * (-q).ln_1p() - ln_b;
        let newton = q - resid / log_dens.exp();
        let next = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - q).abs();
        q = next;
        if step <= 4.0 * f64::EPSILON * q || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    let resid = reg_inc_beta_split(q, 1.0 - q, alpha, beta)? - omega;
    if resid.abs() > INV_OMEGA_TOL {
        return Err(Error::Convergence {
            func: "inv_reg_inc_beta",
            detail: format!("omega = {omega}, alpha = {alpha}, beta = {beta}: residual {resid:e}"),
        });
    }
    Ok(q)
}
