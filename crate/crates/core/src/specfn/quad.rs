//! Tanh-sinh quadrature against beta weights on `(0, 1)`.
//!
//! Every integral in this crate has the shape
//! `∫₀¹ γ^{α−1}(1−γ)^{β−1} f(γ) dγ` with possibly singular endpoint
//! behaviour. Substituting `γ = (1 + tanh(π/2 · sinh t)) / 2` turns the weight
//! into a double-exponentially decaying function of `t`, so the trapezoidal
//! rule on the real line converges quickly without splitting the interval.
//! Abscissae and their complements `1 − γ` are both formed directly from `t`,
//! which keeps nodes next to either endpoint exact.

use std::f64::consts::PI;

use super::gamma::ln_beta;
use crate::{Error, Result};

/// Tolerances for [`integrate_beta_weighted`] and friends.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct QuadSettings {
    /// Relative tolerance between successive refinement levels.
    pub rel_tol: f64,
    /// Absolute tolerance, used when the integral is close to zero.
    pub abs_tol: f64,
    /// Number of step halvings before giving up.
    pub max_refinement_level: u32,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_refinement_level: 12,
        }
    }
}

impl QuadSettings {
    pub fn with_rel_tol(rel_tol: f64) -> Result<Self> {
        let settings = QuadSettings {
            rel_tol,
            ..Default::default()
        };
        settings.validate()?;
        Ok(settings)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::validation(
                "rel_tol",
                format!("{} must be positive", self.rel_tol),
            ));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::validation(
                "abs_tol",
                format!("{} must be positive", self.abs_tol),
            ));
        }
        if self.max_refinement_level < 1 {
            return Err(Error::validation("max_refinement_level", "must be at least 1"));
        }
        Ok(())
    }
}

// Weights below exp(LOG_CUTOFF) relative to a unit-mass density are dropped.
const LOG_CUTOFF: f64 = -50.0;
// Range scan resolution and hard cap for |t|.
const T_SCAN_STEP: f64 = 0.25;
const T_CAP: f64 = 10.0;
// Levels below this are never accepted; guards against coarse grids that
// straddle a narrow peak and happen to agree.
const MIN_LEVEL: u32 = 3;

/// A quadrature node: the abscissa, its complement and the log of the
/// normalized weight (beta density times the Jacobian of the substitution).
#[derive(Debug, Clone, Copy)]
struct Node {
    x: f64,
    xc: f64,
    log_w: f64,
}

#[derive(Debug, Clone, Copy)]
struct BetaWeight {
    alpha: f64,
    beta: f64,
    ln_b: f64,
}

impl BetaWeight {
    fn node(&self, t: f64) -> Node {
        let u = 0.5 * PI * t.sinh();
        let (x, xc, ln_x, ln_xc) = if u >= 0.0 {
            let e = (-2.0 * u).exp();
            let l = e.ln_1p();
            (1.0 / (1.0 + e), e / (1.0 + e), -l, -2.0 * u - l)
        } else {
            let e = (2.0 * u).exp();
            let l = e.ln_1p();
            (e / (1.0 + e), 1.0 / (1.0 + e), 2.0 * u - l, -l)
        };
        let log_w = self.alpha * ln_x + self.beta * ln_xc - self.ln_b + (PI * t.cosh()).ln();
        Node { x, xc, log_w }
    }

    /// Extent of the t-range on one side (`dir` = ±1) outside which the
    /// weight is negligible.
    fn extent(&self, dir: f64) -> f64 {
        let mut last_live = 0.0;
        let mut t = 0.0;
        while t <= T_CAP {
            if self.node(dir * t).log_w >= LOG_CUTOFF {
                last_live = t;
            }
            t += T_SCAN_STEP;
        }
        (last_live + T_SCAN_STEP).min(T_CAP)
    }
}

/// `E[f(γ, 1−γ)]` for `γ ~ Beta(α, β)`.
///
/// The integrand receives both the abscissa and its complement so callers can
/// avoid forming `1 − γ` by subtraction near `γ = 1`.
pub fn beta_expectation_split<F>(f: F, alpha: f64, beta: f64, settings: &QuadSettings) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::domain(
            "integrate_beta_weighted",
            format!("alpha = {alpha}, beta = {beta} must be positive"),
        ));
    }
    settings.validate()?;

    let weight = BetaWeight {
        alpha,
        beta,
        ln_b: ln_beta(alpha, beta),
    };
    let t_lo = -weight.extent(-1.0).ceil();
    let t_hi = weight.extent(1.0).ceil();

    // Running sums of w·f and w over all nodes visited so far.
    let mut sum_wf = 0.0;
    let mut sum_w = 0.0;
    let eval = |t: f64, sum_wf: &mut f64, sum_w: &mut f64| -> Result<()> {
        let node = weight.node(t);
        if node.log_w < LOG_CUTOFF {
            return Ok(());
        }
        let w = node.log_w.exp();
        let fx = f(node.x, node.xc);
        if !fx.is_finite() {
            return Err(Error::domain(
                "integrate_beta_weighted",
                format!("integrand is {fx} at x = {:e}", node.x),
            ));
        }
        *sum_wf += w * fx;
        *sum_w += w;
        Ok(())
    };

    let span = (t_hi - t_lo) as u64;
    for j in 0..=span {
        eval(t_lo + j as f64, &mut sum_wf, &mut sum_w)?;
    }
    let mut h = 1.0;
    let mut intervals = span;
    let mut prev = (sum_wf * h, sum_w * h);
    let mut last_err = f64::INFINITY;

    for level in 1..=settings.max_refinement_level {
        h *= 0.5;
        intervals *= 2;
        // New nodes sit at odd multiples of h.
        for j in (1..intervals).step_by(2) {
            eval(t_lo + j as f64 * h, &mut sum_wf, &mut sum_w)?;
        }
        let est = (sum_wf * h, sum_w * h);
        let err = (est.0 - prev.0).abs();
        let err_mass = (est.1 - prev.1).abs();
        last_err = err;
        let tol = settings.abs_tol.max(settings.rel_tol * est.0.abs());
        let tol_mass = settings.abs_tol.max(settings.rel_tol);
        if level >= MIN_LEVEL && err <= tol && err_mass <= tol_mass {
            return Ok(est.0);
        }
        prev = est;
    }
    Err(Error::Quadrature {
        estimate: prev.0,
        error_bound: last_err,
    })
}

/// `E[f(γ)]` for `γ ~ Beta(α, β)`.
pub fn beta_expectation<F>(f: F, alpha: f64, beta: f64, settings: &QuadSettings) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    beta_expectation_split(|x, _| f(x), alpha, beta, settings)
}

/// `∫₀¹ γ^{α−1}(1−γ)^{β−1} f(γ) dγ`.
///
/// Tolerances apply to the normalized expectation; the result is that
/// expectation times `B(α, β)`.
pub fn integrate_beta_weighted<F>(f: F, alpha: f64, beta: f64, settings: &QuadSettings) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let e = beta_expectation(f, alpha, beta, settings)?;
    Ok(e * ln_beta(alpha, beta).exp())
}

/// [`integrate_beta_weighted`] with an integrand taking `(γ, 1 − γ)`.
pub fn integrate_beta_weighted_split<F>(f: F, alpha: f64, beta: f64, settings: &QuadSettings) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let e = beta_expectation_split(f, alpha, beta, settings)?;
    Ok(e * ln_beta(alpha, beta).exp())
}

/// `∫₀¹ f(x) dx` where `f` receives `(x, 1 − x)`.
pub fn integrate_unit<F>(f: F, settings: &QuadSettings) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    beta_expectation_split(f, 1.0, 1.0, settings)
}

/// `∫₀^∞ f(w) dw` through `w = x / (1 − x)`.
pub fn integrate_half_line<F>(f: F, settings: &QuadSettings) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_unit(
        |x, xc| {
            if xc == 0.0 || x == 0.0 {
                return 0.0;
            }
            let w = x / xc;
            let v = f(w) / (xc * xc);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        settings,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfn::log_gamma;

    fn s() -> QuadSettings {
        QuadSettings::default()
    }

    #[test]
    fn unit_weight_integrates_to_one() {
        let v = integrate_beta_weighted(|_| 1.0, 1.0, 1.0, &s()).unwrap();
        assert!((v - 1.0).abs() < 1e-13);
    }

    #[test]
    fn constant_integrand_gives_beta_function() {
        let v = integrate_beta_weighted(|_| 1.0, 2.5, 3.5, &s()).unwrap();
        let b = (log_gamma(2.5).unwrap() + log_gamma(3.5).unwrap() - log_gamma(6.0).unwrap()).exp();
        assert!((v / b - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_endpoints() {
        // ∫ x^{-1/2} (1-x)^{-1/2} dx = π
        let v = integrate_beta_weighted(|_| 1.0, 0.5, 0.5, &s()).unwrap();
        assert!((v - PI).abs() < 1e-11);
        // ∫ ln(x) dx = -1
        let v = integrate_unit(|x, _| x.ln(), &s()).unwrap();
        assert!((v + 1.0).abs() < 1e-11);
    }

    #[test]
    fn peaked_weight_converges() {
        // E[γ] under Beta(300, 700) is 0.3
        let v = beta_expectation(|x| x, 300.0, 700.0, &s()).unwrap();
        assert!((v - 0.3).abs() < 1e-10);
    }

    #[test]
    fn half_line() {
        let v = integrate_half_line(|w| (-w).exp(), &s()).unwrap();
        assert!((v - 1.0).abs() < 1e-10);
        let v = integrate_half_line(|w| 1.0 / (1.0 + w * w), &s()).unwrap();
        assert!((v - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn refinement_limit_reports_estimate() {
        let tight = QuadSettings {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            max_refinement_level: 3,
        };
        match integrate_unit(|x, _| (40.0 * x).sin(), &tight) {
            Err(Error::Quadrature { estimate, error_bound }) => {
                assert!(estimate.is_finite());
                assert!(error_bound > 0.0);
            }
            other => panic!("expected quadrature error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_settings() {
        assert!(QuadSettings::with_rel_tol(0.0).is_err());
        assert!(QuadSettings::with_rel_tol(-1.0).is_err());
        let bad = QuadSettings {
            max_refinement_level: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        assert!(integrate_beta_weighted(|_| 1.0, 0.0, 1.0, &s()).is_err());
    }

    #[test]
    fn deterministic() {
        let f = |x: f64| (1.0 + 3.0 * x).powf(-2.5);
        let a = integrate_beta_weighted(f, 1.5, 2.0, &s()).unwrap();
        let b = integrate_beta_weighted(f, 1.5, 2.0, &s()).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}
