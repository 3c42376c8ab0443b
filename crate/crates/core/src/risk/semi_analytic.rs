//! Risk differences as Poisson mixtures of one-dimensional integrals.
//!
//! With `eta = 1`, `‖X‖² | Z ~ chi2(p + 2Z)` for `Z ~ Po(theta/2)`, so each
//! risk difference is `Σ_z Po(z; theta/2) · term(z)`.

use std::cell::RefCell;

use crate::dominance::{constants, shrinkage_integral};
use crate::model::ModelConfig;
use crate::predictive::PARAM_MATCH_TOL;
use crate::specfn::{
    beta_expectation_split, digamma_diff, ln_beta, ln_gamma, ln_reg_inc_beta_split, small_q_log_correction,
    QuadSettings,
};
use crate::{Error, Result};

/// The Poisson sum stops once this much probability mass is covered.
const POISSON_MASS: f64 = 1.0 - 1e-12;

/// Terms with smaller Poisson weight are skipped; every term used here is
/// bounded by a small multiple of `p/2 − a`.
const NEGLIGIBLE_WEIGHT: f64 = 1e-20;

/// Below this `q` the log incomplete beta uses its small-argument series.
const SMALL_Q: f64 = 1e-8;

/// Largest `z` visited for mean `lambda`: `⌈λ + 40√λ + 100⌉`.
pub fn poisson_truncation_cap(lambda: f64) -> u64 {
    (lambda + 40.0 * lambda.sqrt() + 100.0).ceil() as u64
}

fn poisson_mixture<F>(theta: f64, mut term: F) -> Result<f64>
where
    F: FnMut(u64) -> Result<f64>,
{
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(Error::validation("theta", format!("{theta} must be finite and >= 0")));
    }
    let lambda = 0.5 * theta;
    if lambda == 0.0 {
        return term(0);
    }
    let ln_lambda = lambda.ln();
    let (mut total, mut mass) = (0.0, 0.0);
    for z in 0..=poisson_truncation_cap(lambda) {
        let weight = (-lambda + z as f64 * ln_lambda - ln_gamma(z as f64 + 1.0)).exp();
        if weight > NEGLIGIBLE_WEIGHT {
            total += weight * term(z)?;
        }
        mass += weight;
        if mass >= POISSON_MASS {
            break;
        }
    }
    Ok(total)
}

/// `D₁(z) + D₂(z)` for `b = n1/2`: the risk difference conditional on the
/// Poisson index, exact when `n2 = 2` and an upper bound otherwise.
pub fn riskdiff_n2eq2_term(config: &ModelConfig, a: f64, z: u64, settings: &QuadSettings) -> Result<f64> {
    let c = constants(config, a)?;
    let sh = config.shape(a);
    let s = sh.k + sh.m + z as f64;
    let d1 = sh.m_prime * digamma_diff(s + sh.l, s)?;
    let d2 = -c.c2 * shrinkage_integral(s + sh.l, c.c1, sh.k + sh.l, settings)?;
    Ok(d1 + d2)
}

/// Exact risk difference `R(hier) − R(ref)` for `b = n1/2` and `n2 = 2`.
pub fn riskdiff_n2eq2(config: &ModelConfig, a: f64, theta: f64, settings: &QuadSettings) -> Result<f64> {
    if (config.n2 - 2.0).abs() > PARAM_MATCH_TOL {
        return Err(Error::domain(
            "riskdiff_n2eq2",
            format!("needs n2 = 2, got {}", config.n2),
        ));
    }
    poisson_mixture(theta, |z| riskdiff_n2eq2_term(config, a, z, settings))
}

/// `ln I_q(alpha, beta)` from the split pair `(q, 1 − q)`.
fn ln_inc_beta(q: f64, qc: f64, alpha: f64, beta: f64) -> Result<f64> {
    if q < SMALL_Q {
        if q == 0.0 {
            return Err(Error::domain("ln_inc_beta", "q = 0"));
        }
        return Ok(alpha * q.ln() - (alpha.ln() + ln_beta(alpha, beta)) + small_q_log_correction(q, alpha, beta));
    }
    ln_reg_inc_beta_split(q, qc, alpha, beta)
}

/// `D(n; z) = −E[ln I_q(m', n/2)]` for `q ~ Beta(m + z, n/2)`.
fn d_term(n: f64, m: f64, m_prime: f64, z: u64, settings: &QuadSettings) -> Result<f64> {
    let beta = 0.5 * n;
    let failure = RefCell::new(None);
    let integrand = |q, qc| {
        ln_inc_beta(q, qc, m_prime, beta).unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    };
    let e = beta_expectation_split(integrand, m + z as f64, beta, settings);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(-e?)
}

/// Exact risk difference `R(hier) − R(ref)` for `b = 1`:
/// `E_Z[D(n1 + n2; Z) − D(n1; Z)]`.
pub fn riskdiff_b1(config: &ModelConfig, a: f64, theta: f64, settings: &QuadSettings) -> Result<f64> {
    config.validate()?;
    if !(a.is_finite() && a < config.half_p()) {
        return Err(Error::domain(
            "riskdiff_b1",
            format!("a = {a} must be below p/2 = {}", config.half_p()),
        ));
    }
    let sh = config.shape(a);
    poisson_mixture(theta, |z| {
        let full = d_term(config.n1 + config.n2, sh.m, sh.m_prime, z, settings)?;
        let side = d_term(config.n1, sh.m, sh.m_prime, z, settings)?;
        Ok(full - side)
    })
}
