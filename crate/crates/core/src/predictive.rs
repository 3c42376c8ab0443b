//! Bayesian predictive densities for `W`.
//!
//! All evaluators return `ln p̂(w; x, v)`. The hierarchical prior with
//! hyperparameters `(b, a)` has four evaluators of increasing specialization:
//!
//! | evaluator | valid for | method |
//! |---|---|---|
//! | [`hier_log_predictive_general`] | any `b > 0`, `a < p/2` | two beta-weighted quadratures |
//! | [`hier_log_predictive_half`] | `b = n1/2` | closed-form denominator, one quadrature |
//! | [`hier_log_predictive_b1`] | `b = 1` | ratio of regularized incomplete betas |
//! | [`hier_log_predictive_closed`] | `b = 1`, `a = p/2 − 1` | elementary closed form |
//!
//! [`log_predictive`] picks the most specialized one that applies.

use serde::{Deserialize, Serialize};

use crate::model::{ModelConfig, Observation};
use crate::specfn::{beta_expectation, ln_beta, ln_reg_inc_beta_split, small_q_log_correction, QuadSettings};
use crate::{Error, Result};

/// Below this `‖x‖²/(v + ‖x‖²)` the `b = 1` evaluator switches to the
/// small-argument series of the incomplete beta ratio (error `O(q³)`).
pub const SMALL_Q_THRESHOLD: f64 = 1e-8;

/// Two floats closer than this are treated as the same hyperparameter value
/// when choosing an evaluator.
pub const PARAM_MATCH_TOL: f64 = 1e-12;

/// Hyperparameters `(b, a)` of the hierarchical shrinkage prior.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub b: f64,
    pub a: f64,
}

impl HyperParams {
    pub fn new(b: f64, a: f64, config: &ModelConfig) -> Result<Self> {
        let hp = HyperParams { b, a };
        hp.validate(config)?;
        Ok(hp)
    }

    pub fn validate(&self, config: &ModelConfig) -> Result<()> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::validation("b", format!("{} must be positive", self.b)));
        }
        if !(self.a.is_finite() && self.a < config.half_p()) {
            return Err(Error::validation(
                "a",
                format!("{} must be below p/2 = {}", self.a, config.half_p()),
            ));
        }
        Ok(())
    }
}

/// The prior behind a predictive density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PriorSpec {
    /// `pi_0(mu, eta) = 1/eta`.
    Reference,
    /// The hierarchical shrinkage prior `pi_{b,a}`.
    Hierarchical(HyperParams),
}

impl PriorSpec {
    pub fn validate(&self, config: &ModelConfig) -> Result<()> {
        match self {
            PriorSpec::Reference => Ok(()),
            PriorSpec::Hierarchical(hp) => hp.validate(config),
        }
    }
}

/// How `b` is chosen, relative to the model where needed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BMode {
    /// `b = n1/2`.
    Half,
    /// `b = 1`.
    One,
    /// An explicit `b`.
    General(f64),
}

impl BMode {
    pub fn resolve(&self, config: &ModelConfig) -> f64 {
        match self {
            BMode::Half => 0.5 * config.n1,
            BMode::One => 1.0,
            BMode::General(b) => *b,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BMode::Half => "half",
            BMode::One => "one",
            BMode::General(_) => "general",
        }
    }
}

/// A prior described independently of `n1`, so one choice can be applied
/// across several model configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriorChoice {
    Reference,
    Hierarchical { b_mode: BMode, a: f64 },
}

impl PriorChoice {
    pub fn resolve(&self, config: &ModelConfig) -> Result<PriorSpec> {
        match self {
            PriorChoice::Reference => Ok(PriorSpec::Reference),
            PriorChoice::Hierarchical { b_mode, a } => Ok(PriorSpec::Hierarchical(HyperParams::new(
                b_mode.resolve(config),
                *a,
                config,
            )?)),
        }
    }
}

/// Which evaluator produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluatorPath {
    Reference,
    Closed,
    BOne,
    Half,
    General,
}

impl EvaluatorPath {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvaluatorPath::Reference => "reference",
            EvaluatorPath::Closed => "closed",
            EvaluatorPath::BOne => "b_one",
            EvaluatorPath::Half => "half",
            EvaluatorPath::General => "general",
        }
    }
}

fn check_inputs(func: &'static str, w: f64, obs: &Observation) -> Result<()> {
    if !(w > 0.0 && w.is_finite()) {
        return Err(Error::domain(func, format!("w = {w} must be positive")));
    }
    if !(obs.v > 0.0 && obs.v.is_finite()) {
        return Err(Error::domain(func, format!("v = {} must be positive", obs.v)));
    }
    if !(obs.x_norm_sq >= 0.0 && obs.x_norm_sq.is_finite()) {
        return Err(Error::domain(
            func,
            format!("x_norm_sq = {} must be >= 0", obs.x_norm_sq),
        ));
    }
    Ok(())
}

fn check_a(func: &'static str, a: f64, config: &ModelConfig) -> Result<()> {
    if !(a.is_finite() && a < config.half_p()) {
        return Err(Error::domain(
            func,
            format!("a = {a} must be below p/2 = {}", config.half_p()),
        ));
    }
    Ok(())
}

/// Predictive density under the reference prior. Depends on `v` only.
pub fn ref_log_predictive(w: f64, obs: &Observation, config: &ModelConfig) -> Result<f64> {
    check_inputs("ref_log_predictive", w, obs)?;
    let k = 0.5 * config.n1;
    let l = 0.5 * config.n2;
    let v = obs.v;
    Ok(-ln_beta(k, l) + k * v.ln() + (l - 1.0) * w.ln() - (k + l) * (v + w).ln())
}

/// Hierarchical predictive density for arbitrary admissible `(b, a)`.
///
/// Both mixing integrals are written as `(base)^{-s} · B(m', b) · E[(1 + cγ)^{-s}]`
/// with `γ ~ Beta(m', b)`, so the quadrature integrand stays in `(0, 1]`.
pub fn hier_log_predictive_general(
    w: f64,
    obs: &Observation,
    hp: &HyperParams,
    config: &ModelConfig,
    settings: &QuadSettings,
) -> Result<f64> {
    check_inputs("hier_log_predictive_general", w, obs)?;
    hp.validate(config)?;
    let sh = config.shape(hp.a);
    let (k, l, mp) = (sh.k, sh.l, sh.m_prime);
    let total = k + l;
    let (v, x) = (obs.v, obs.x_norm_sq);

    let mixing = |base: f64, power: f64| -> Result<f64> {
        if x == 0.0 {
            return Ok(0.0);
        }
        let c = x / base;
        let e = beta_expectation(|g| (-power * (c * g).ln_1p()).exp(), mp, hp.b, settings)
            .map_err(|e| e.context(format!("mixing integral with base {base}, exponent {power}")))?;
        Ok(e.ln())
    };
    let ln_num = mixing(v + w, total + mp)?;
    let ln_den = mixing(v, k + mp)?;

    Ok((l - 1.0) * w.ln() - ln_beta(k + mp, l) - (total + mp) * (v + w).ln() + (k + mp) * v.ln() + ln_num - ln_den)
}

/// Hierarchical predictive density with `b = n1/2`.
///
/// The denominator integral is `B(n1/2, m') v^{-n1/2} (v + ‖x‖²)^{-m'}`; the
/// numerator reduces to `E[(1 − qγ)^{n2/2}]` over `γ ~ Beta(m', n1/2)` with
/// `q = ‖x‖²/(v + w + ‖x‖²)`.
pub fn hier_log_predictive_half(
    w: f64,
    obs: &Observation,
    a: f64,
    config: &ModelConfig,
    settings: &QuadSettings,
) -> Result<f64> {
    check_inputs("hier_log_predictive_half", w, obs)?;
    check_a("hier_log_predictive_half", a, config)?;
    let sh = config.shape(a);
    let (k, l, mp) = (sh.k, sh.l, sh.m_prime);
    let (v, x) = (obs.v, obs.x_norm_sq);
    let vw = v + w;

    let ln_e = if x == 0.0 {
        0.0
    } else {
        let q = x / (vw + x);
        beta_expectation(|g| (l * (-q * g).ln_1p()).exp(), mp, k, settings)
            .map_err(|e| e.context("numerator integral for b = n1/2"))?
            .ln()
    };

    Ok(
        (l - 1.0) * w.ln() - ln_beta(k + mp, l) - (k + l) * vw.ln() - mp * (vw + x).ln()
            + ln_e
            + k * v.ln()
            + mp * (v + x).ln(),
    )
}

/// `ln[I_{q_num}(m', (n1+n2)/2) / I_{q_den}(m', n1/2)]`, the log of the factor
/// multiplying the reference density when `b = 1`.
pub(crate) fn b1_log_correction(w: f64, obs: &Observation, a: f64, config: &ModelConfig) -> Result<f64> {
    let sh = config.shape(a);
    let (k, total, mp) = (sh.k, sh.k + sh.l, sh.m_prime);
    let (v, x) = (obs.v, obs.x_norm_sq);
    let vw = v + w;
    let q_den = x / (v + x);
    let q_num = x / (vw + x);

    if q_den < SMALL_Q_THRESHOLD {
        // I_q(α, β) = q^α / (α B(α, β)) · (1 + O(q)); the q^α factors combine
        // into ((v + x)/(v + w + x))^m', which stays finite at x = 0.
        return Ok(mp * ((v + x).ln() - (vw + x).ln()) - ln_beta(mp, total)
            + ln_beta(mp, k)
            + small_q_log_correction(q_num, mp, total)
            - small_q_log_correction(q_den, mp, k));
    }
    let ln_num = ln_reg_inc_beta_split(q_num, vw / (vw + x), mp, total)?;
    let ln_den = ln_reg_inc_beta_split(q_den, v / (v + x), mp, k)?;
    Ok(ln_num - ln_den)
}

/// Hierarchical predictive density with `b = 1`: the reference density times
/// a ratio of regularized incomplete beta functions.
pub fn hier_log_predictive_b1(w: f64, obs: &Observation, a: f64, config: &ModelConfig) -> Result<f64> {
    check_inputs("hier_log_predictive_b1", w, obs)?;
    check_a("hier_log_predictive_b1", a, config)?;
    Ok(ref_log_predictive(w, obs, config)? + b1_log_correction(w, obs, a, config)?)
}

/// Hierarchical predictive density with `b = 1` and `a = p/2 − 1` (`p ≥ 2`),
/// where the incomplete beta ratio becomes
/// `[1 − ((v+w)/(v+w+‖x‖²))^{(n1+n2)/2}] / [1 − (v/(v+‖x‖²))^{n1/2}]`.
pub fn hier_log_predictive_closed(w: f64, obs: &Observation, config: &ModelConfig) -> Result<f64> {
    check_inputs("hier_log_predictive_closed", w, obs)?;
    if config.p < 2 {
        return Err(Error::domain(
            "hier_log_predictive_closed",
            format!("needs p >= 2, got p = {}", config.p),
        ));
    }
    let k = 0.5 * config.n1;
    let total = 0.5 * (config.n1 + config.n2);
    let (v, x) = (obs.v, obs.x_norm_sq);
    let vw = v + w;
    let ratio_den = x / v;
    let correction = if ratio_den < 1e-200 {
        // Both brackets are linear in ‖x‖² at the origin.
        (total / k).ln() + v.ln() - vw.ln()
    } else {
        let num = -(-total * (x / vw).ln_1p()).exp_m1();
        let den = -(-k * ratio_den.ln_1p()).exp_m1();
        num.ln() - den.ln()
    };
    Ok(ref_log_predictive(w, obs, config)? + correction)
}

/// Evaluates the predictive density under `prior`, choosing the most
/// specialized evaluator. Uses default quadrature settings.
pub fn log_predictive(w: f64, obs: &Observation, prior: &PriorSpec, config: &ModelConfig) -> Result<f64> {
    log_predictive_with(w, obs, prior, config, &QuadSettings::default()).map(|(v, _)| v)
}

/// The evaluator [`log_predictive_with`] would use for `prior`.
pub fn select_path(prior: &PriorSpec, config: &ModelConfig) -> EvaluatorPath {
    match prior {
        PriorSpec::Reference => EvaluatorPath::Reference,
        PriorSpec::Hierarchical(hp) => {
            let near = |x: f64, y: f64| (x - y).abs() <= PARAM_MATCH_TOL;
            if near(hp.b, 1.0) {
                if config.p >= 2 && near(hp.a, config.half_p() - 1.0) {
                    EvaluatorPath::Closed
                } else {
                    EvaluatorPath::BOne
                }
            } else if near(hp.b, 0.5 * config.n1) {
                EvaluatorPath::Half
            } else {
                EvaluatorPath::General
            }
        }
    }
}

/// [`log_predictive`] with explicit quadrature settings; also reports the
/// evaluator used.
pub fn log_predictive_with(
    w: f64,
    obs: &Observation,
    prior: &PriorSpec,
    config: &ModelConfig,
    settings: &QuadSettings,
) -> Result<(f64, EvaluatorPath)> {
    prior.validate(config)?;
    let path = select_path(prior, config);
    let value = match (path, prior) {
        (EvaluatorPath::Reference, _) => ref_log_predictive(w, obs, config)?,
        (EvaluatorPath::Closed, _) => hier_log_predictive_closed(w, obs, config)?,
        (EvaluatorPath::BOne, PriorSpec::Hierarchical(hp)) => hier_log_predictive_b1(w, obs, hp.a, config)?,
        (EvaluatorPath::Half, PriorSpec::Hierarchical(hp)) => hier_log_predictive_half(w, obs, hp.a, config, settings)?,
        (EvaluatorPath::General, PriorSpec::Hierarchical(hp)) => {
            hier_log_predictive_general(w, obs, hp, config, settings)?
        }
        _ => unreachable!("hierarchical paths are only selected for hierarchical priors"),
    };
    Ok((value, path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: u32, n1: f64, n2: f64) -> ModelConfig {
        ModelConfig::new(p, n1, n2).unwrap()
    }

    fn qs() -> QuadSettings {
        QuadSettings::default()
    }

    #[test]
    fn reference_value_and_independence_of_x() {
        let c = cfg(2, 2.0, 2.0);
        let a = ref_log_predictive(1.0, &Observation::new(5.0, 1.0).unwrap(), &c).unwrap();
        let b = ref_log_predictive(1.0, &Observation::new(0.0, 1.0).unwrap(), &c).unwrap();
        assert!((a - 0.25f64.ln()).abs() < 1e-15);
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn hand_value_of_b1_density() {
        // n1 = n2 = p = 2, a = 0, v = w = 1, ‖x‖² = 2. Prop.-2 integrals by hand:
        // numerator ∫(2 + 2γ)^{-3} dγ = 3/64, denominator ∫(1 + 2γ)^{-2} dγ = 1/3,
        // prefactor 1/B(2, 1) = 2, so the density is 2 · (3/64) · 3 = 0.28125.
        let c = cfg(2, 2.0, 2.0);
        let obs = Observation::new(2.0, 1.0).unwrap();
        let expected = 0.28125f64.ln();
        assert!((hier_log_predictive_b1(1.0, &obs, 0.0, &c).unwrap() - expected).abs() < 1e-13);
        assert!((hier_log_predictive_closed(1.0, &obs, &c).unwrap() - expected).abs() < 1e-13);
        let hp = HyperParams::new(1.0, 0.0, &c).unwrap();
        let g = hier_log_predictive_general(1.0, &obs, &hp, &c, &qs()).unwrap();
        assert!((g - expected).abs() < 1e-9);
    }

    #[test]
    fn zero_x_matches_collapsed_form() {
        let c = cfg(5, 3.0, 4.0);
        let (v, w) = (1.7, 0.6);
        let obs = Observation::new(0.0, v).unwrap();
        for &(b, a) in &[(0.7, 0.3), (1.5, -1.0), (1.0, 2.0), (4.0, 1.0)] {
            let hp = HyperParams::new(b, a, &c).unwrap();
            let sh = c.shape(a);
            let (k, l, mp) = (sh.k, sh.l, sh.m_prime);
            let expected =
                (l - 1.0) * f64::ln(w) + (k + mp) * f64::ln(v) - (k + l + mp) * f64::ln(v + w) - ln_beta(k + mp, l);
            let g = hier_log_predictive_general(w, &obs, &hp, &c, &qs()).unwrap();
            assert!((g - expected).abs() < 1e-12, "b={b} a={a}");
            let h = hier_log_predictive_half(w, &obs, a, &c, &qs()).unwrap();
            assert!((h - expected).abs() < 1e-12);
            let o = hier_log_predictive_b1(w, &obs, a, &c).unwrap();
            assert!((o - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn b1_limit_large_x() {
        let c = cfg(14, 3.0, 5.0);
        let obs = Observation::new(1e12, 2.0).unwrap();
        for &a in &[0.0, 3.0, 6.0, -2.0] {
            let r = ref_log_predictive(1.3, &obs, &c).unwrap();
            let h = hier_log_predictive_b1(1.3, &obs, a, &c).unwrap();
            assert!((h - r).abs() < 1e-6, "a={a}: {h} vs {r}");
        }
        let h = hier_log_predictive_closed(1.3, &obs, &c).unwrap();
        assert!((h - ref_log_predictive(1.3, &obs, &c).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn small_q_branch_is_continuous() {
        let c = cfg(6, 3.0, 2.5);
        let v = 1.0;
        // Straddle the switch at q_den = 1e-8.
        let below = Observation::new(0.99e-8, v).unwrap();
        let above = Observation::new(1.01e-8, v).unwrap();
        let hb = hier_log_predictive_b1(0.8, &below, 1.0, &c).unwrap();
        let ha = hier_log_predictive_b1(0.8, &above, 1.0, &c).unwrap();
        assert!((hb - ha).abs() < 1e-9);
        let hp = HyperParams::new(1.0, 1.0, &c).unwrap();
        let g = hier_log_predictive_general(0.8, &below, &hp, &c, &qs()).unwrap();
        assert!((hb - g).abs() < 1e-10);
    }

    #[test]
    fn domain_errors() {
        let c = cfg(2, 2.0, 2.0);
        let obs = Observation::new(1.0, 1.0).unwrap();
        assert!(ref_log_predictive(0.0, &obs, &c).is_err());
        assert!(ref_log_predictive(1.0, &Observation { x_norm_sq: 1.0, v: 0.0 }, &c).is_err());
        assert!(hier_log_predictive_b1(1.0, &obs, 1.0, &c).is_err());
        assert!(hier_log_predictive_half(1.0, &obs, 1.5, &c, &qs()).is_err());
        assert!(hier_log_predictive_closed(1.0, &obs, &cfg(1, 2.0, 2.0)).is_err());
        assert!(HyperParams::new(0.0, 0.0, &c).is_err());
        assert!(HyperParams::new(1.0, 1.0, &c).is_err());
    }

    #[test]
    fn dispatch() {
        let c = cfg(2, 3.0, 2.0);
        let hp = |b, a| PriorSpec::Hierarchical(HyperParams { b, a });
        assert_eq!(select_path(&PriorSpec::Reference, &c), EvaluatorPath::Reference);
        assert_eq!(select_path(&hp(1.0, 0.0), &c), EvaluatorPath::Closed);
        assert_eq!(select_path(&hp(1.0, -0.5), &c), EvaluatorPath::BOne);
        assert_eq!(select_path(&hp(1.5, 0.0), &c), EvaluatorPath::Half);
        assert_eq!(select_path(&hp(0.7, 0.3), &c), EvaluatorPath::General);
        assert_eq!(select_path(&hp(1.0, 0.0), &cfg(1, 3.0, 2.0)), EvaluatorPath::BOne);

        let obs = Observation::new(2.0, 1.2).unwrap();
        for prior in [
            PriorSpec::Reference,
            hp(1.0, 0.0),
            hp(1.0, -0.5),
            hp(1.5, 0.0),
            hp(0.7, 0.3),
        ] {
            let fast = log_predictive(0.9, &obs, &prior, &c).unwrap();
            let PriorSpec::Hierarchical(h) = prior else { continue };
            let slow = hier_log_predictive_general(0.9, &obs, &h, &c, &qs()).unwrap();
            assert!((fast - slow).abs() < 1e-8, "{prior:?}");
        }
    }
}
