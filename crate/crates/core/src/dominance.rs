//! Checks of the sufficient (and, for `n2 = 2`, necessary) conditions under
//! which a hierarchical predictive density dominates the reference one.
//!
//! Every margin is reported as `RHS − LHS` of the inequality being checked, so
//! a nonnegative margin means the inequality holds. Weak inequalities are
//! accepted down to `−MARGIN_TOL`.

use serde::{Deserialize, Serialize};

use crate::model::ModelConfig;
use crate::predictive::{PriorSpec, PARAM_MATCH_TOL};
use crate::specfn::{digamma_diff, integrate_beta_weighted_split, ln_gamma, QuadSettings};
use crate::{Error, Result};

/// Slack allowed on weak inequalities.
pub const MARGIN_TOL: f64 = 1e-9;

/// The pair `(c1, c2)` entering the dominance conditions for `b = n1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceConstants {
    pub c1: f64,
    pub c2: f64,
}

/// Outcome of a single inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    ProvenDominates,
    /// Only reachable for `n2 = 2`, where the integral condition is also necessary.
    ProvenFailsNecessary,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// Integral condition for `b = n1/2`.
    Thm1,
    /// Closed-form sufficient bound for the integral condition.
    Cor1i,
    /// Existence of a dominating `a` near `p/2`.
    Cor1ii,
    /// Necessary and sufficient condition for `n2 = 2`.
    Cor2,
    /// `b = 1`, `0 ≤ a < p/2`, `n1 > 2`.
    Thm3,
    /// `b = 1`, `a = p/2 − 1`, `p ≥ 2`.
    Thm4,
}

/// Result of [`dominance_report`] and [`cor2_verdict`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub holds: Verdict,
    pub fired_by: Option<Condition>,
    /// `RHS − LHS` of the deciding inequality; `None` for conditions that are
    /// pure parameter-range checks.
    pub margin: Option<f64>,
    pub tolerance: f64,
    pub note: String,
}

impl DominanceVerdict {
    fn new(holds: Verdict, fired_by: Option<Condition>, margin: Option<f64>, note: impl Into<String>) -> Self {
        DominanceVerdict {
            holds,
            fired_by,
            margin,
            tolerance: MARGIN_TOL,
            note: note.into(),
        }
    }
}

fn check_a(func: &'static str, config: &ModelConfig, a: f64) -> Result<()> {
    if !(a.is_finite() && a < config.half_p()) {
        return Err(Error::domain(
            func,
            format!("a = {a} must be below p/2 = {}", config.half_p()),
        ));
    }
    Ok(())
}

fn is_n2_two(config: &ModelConfig) -> bool {
    (config.n2 - 2.0).abs() <= PARAM_MATCH_TOL
}

/// Computes `(c1, c2)`. For `n2 ≤ 2` the gamma ratio is taken in log space.
pub fn constants(config: &ModelConfig, a: f64) -> Result<DominanceConstants> {
    check_a("constants", config, a)?;
    let sh = config.shape(a);
    let (k, l, mp) = (sh.k, sh.l, sh.m_prime);
    if config.n2 <= 2.0 {
        let ln_ratio = ln_gamma(k) + ln_gamma(k + l + mp) - ln_gamma(k + l) - ln_gamma(k + mp);
        Ok(DominanceConstants {
            c1: ln_ratio.exp_m1(),
            c2: 1.0,
        })
    } else {
        Ok(DominanceConstants {
            c1: mp / (k + l - 1.0),
            c2: l,
        })
    }
}

/// `∫₀¹ (1−ρ)^{s−1} ρ^{−1} [1 − (1 + c1 ρ)^{−e}] dρ`, with the integrand's
/// removable singularity at 0 handled by the beta-weighted rule.
pub(crate) fn shrinkage_integral(s: f64, c1: f64, e: f64, settings: &QuadSettings) -> Result<f64> {
    integrate_beta_weighted_split(
        |rho, _| {
            if rho == 0.0 {
                e * c1
            } else {
                -(-e * (c1 * rho).ln_1p()).exp_m1() / rho
            }
        },
        1.0,
        s,
        settings,
    )
}

/// The integral condition for `b = n1/2`:
/// `(m'/c2)[ψ(k+l+m) − ψ(k+m)] ≤ ∫₀¹ (1−ρ)^{k+l+m−1} ρ^{−1}[1 − (1+c1ρ)^{−(k+l)}] dρ`.
pub fn thm1_condition(config: &ModelConfig, a: f64, settings: &QuadSettings) -> Result<ConditionCheck> {
    check_a("thm1_condition", config, a)?;
    let sh = config.shape(a);
    let c = constants(config, a)?;
    let lhs = sh.m_prime / c.c2 * digamma_diff(sh.k + sh.l + sh.m, sh.k + sh.m)?;
    let rhs = shrinkage_integral(sh.k + sh.l + sh.m, c.c1, sh.k + sh.l, settings)
        .map_err(|e| e.context("integral condition"))?;
    let margin = rhs - lhs;
    Ok(ConditionCheck {
        holds: margin >= -MARGIN_TOL,
        margin,
    })
}

/// Closed-form sufficient bound for [`thm1_condition`]:
/// `ψ(k+l+m) − ψ(k+m) ≤ (c2/m') (n+2)/n [1 − (1 + 2c1/(n+2))^{−(k+l)}]`,
/// with `n = n1 + n2 + p`.
pub fn cor1_i_condition(config: &ModelConfig, a: f64) -> Result<ConditionCheck> {
    check_a("cor1_i_condition", config, a)?;
    let sh = config.shape(a);
    let c = constants(config, a)?;
    let n = config.n1 + config.n2 + f64::from(config.p);
    let lhs = digamma_diff(sh.k + sh.l + sh.m, sh.k + sh.m)?;
    let bracket = -(-(sh.k + sh.l) * (2.0 * c.c1 / (n + 2.0)).ln_1p()).exp_m1();
    let rhs = c.c2 / sh.m_prime * (n + 2.0) / n * bracket;
    let margin = rhs - lhs;
    Ok(ConditionCheck {
        holds: margin >= -MARGIN_TOL,
        margin,
    })
}

/// Strict inequality guaranteeing that some `a` close enough to `p/2`
/// dominates. Independent of `a`; the neighborhood is not computed.
///
/// For `n2 ≤ 2` the right side is `(k+l)c2/(k+l+m) · [ψ(k+l) − ψ(k)]`,
/// for `n2 > 2` it is `(k+l)c2/((k+l+m)(k+l−1))`.
pub fn cor1_ii_condition(config: &ModelConfig) -> Result<ConditionCheck> {
    config.validate()?;
    let sh = config.shape(0.0);
    let (k, l, m) = (sh.k, sh.l, sh.m);
    let lhs = digamma_diff(k + l + m, k + m)?;
    let scale = (k + l) / (k + l + m);
    let rhs = if config.n2 <= 2.0 {
        scale * digamma_diff(k + l, k)?
    } else {
        scale * l / (k + l - 1.0)
    };
    let margin = rhs - lhs;
    Ok(ConditionCheck {
        holds: margin > 0.0,
        margin,
    })
}

/// Necessary and sufficient check for `n2 = 2`:
/// `m'/(k+m) ≤ ∫₀¹ (1−ρ)^{k+m} ρ^{−1}[1 − (1 + (m'/k)ρ)^{−(k+1)}] dρ`.
///
/// For `n1 = 2` the verdict follows the exact rule `0 ≤ a < p/2`; the
/// quadrature margin is still reported.
pub fn cor2_verdict(config: &ModelConfig, a: f64, settings: &QuadSettings) -> Result<DominanceVerdict> {
    check_a("cor2_verdict", config, a)?;
    if !is_n2_two(config) {
        return Err(Error::domain(
            "cor2_verdict",
            format!("needs n2 = 2, got {}", config.n2),
        ));
    }
    let sh = config.shape(a);
    let (k, m, mp) = (sh.k, sh.m, sh.m_prime);
    let lhs = mp / (k + m);
    let rhs = shrinkage_integral(k + m + 1.0, mp / k, k + 1.0, settings)
        .map_err(|e| e.context("n2 = 2 integral condition"))?;
    let margin = rhs - lhs;
    let (holds, note) = if (config.n1 - 2.0).abs() <= PARAM_MATCH_TOL {
        (a >= 0.0, "n1 = 2: dominates iff 0 <= a < p/2")
    } else {
        (
            margin >= -MARGIN_TOL,
            "n2 = 2: integral condition is necessary and sufficient",
        )
    };
    let verdict = if holds {
        Verdict::ProvenDominates
    } else {
        Verdict::ProvenFailsNecessary
    };
    Ok(DominanceVerdict::new(
        verdict,
        Some(Condition::Cor2),
        Some(margin),
        note,
    ))
}

/// Parameter range for the `b = 1` dominance result: `0 ≤ a < p/2`, `n1 > 2`.
pub fn thm3_applicable(config: &ModelConfig, a: f64) -> bool {
    a >= 0.0 && a < config.half_p() && config.n1 > 2.0
}

/// Parameter range for the `b = 1`, `a = p/2 − 1` dominance result.
pub fn thm4_applicable(config: &ModelConfig, a: f64) -> bool {
    config.p >= 2 && (a - (config.half_p() - 1.0)).abs() <= PARAM_MATCH_TOL
}

/// Runs the applicable checks for a hierarchical prior and returns the first
/// decisive verdict.
///
/// `b = 1`: Thm4, then Thm3. `b = n1/2`: Cor2 when `n2 = 2`, otherwise
/// Cor1(i), then Thm1. Any other `b` is `Inconclusive`. Failure is only ever
/// claimed through the `n2 = 2` condition.
pub fn dominance_report(prior: &PriorSpec, config: &ModelConfig, settings: &QuadSettings) -> Result<DominanceVerdict> {
    let hp = match prior {
        PriorSpec::Reference => {
            return Err(Error::validation(
                "prior",
                "dominance is checked for hierarchical priors only",
            ))
        }
        PriorSpec::Hierarchical(hp) => hp,
    };
    hp.validate(config)?;
    let a = hp.a;
    let b_one = (hp.b - 1.0).abs() <= PARAM_MATCH_TOL;
    let b_half = (hp.b - 0.5 * config.n1).abs() <= PARAM_MATCH_TOL;

    if b_one {
        if thm4_applicable(config, a) {
            return Ok(DominanceVerdict::new(
                Verdict::ProvenDominates,
                Some(Condition::Thm4),
                None,
                "b = 1, a = p/2 - 1, p >= 2",
            ));
        }
        if thm3_applicable(config, a) {
            return Ok(DominanceVerdict::new(
                Verdict::ProvenDominates,
                Some(Condition::Thm3),
                None,
                "b = 1, 0 <= a < p/2, n1 > 2",
            ));
        }
    }
    if b_half {
        if is_n2_two(config) {
            return cor2_verdict(config, a, settings);
        }
        let c1i = cor1_i_condition(config, a)?;
        if c1i.holds {
            return Ok(DominanceVerdict::new(
                Verdict::ProvenDominates,
                Some(Condition::Cor1i),
                Some(c1i.margin),
                "closed-form bound holds",
            ));
        }
        let t1 = thm1_condition(config, a, settings)?;
        if t1.holds {
            return Ok(DominanceVerdict::new(
                Verdict::ProvenDominates,
                Some(Condition::Thm1),
                Some(t1.margin),
                "integral condition holds",
            ));
        }
        return Ok(DominanceVerdict::new(
            Verdict::Inconclusive,
            Some(Condition::Thm1),
            Some(t1.margin),
            "no sufficient condition holds",
        ));
    }
    if b_one {
        return Ok(DominanceVerdict::new(
            Verdict::Inconclusive,
            None,
            None,
            "b = 1 outside the parameter ranges of the known results",
        ));
    }
    Ok(DominanceVerdict::new(
        Verdict::Inconclusive,
        None,
        None,
        format!(
            "unsupported b = {}: only b = 1 and b = n1/2 have dominance results",
            hp.b
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictive::HyperParams;

    fn cfg(p: u32, n1: f64, n2: f64) -> ModelConfig {
        ModelConfig::new(p, n1, n2).unwrap()
    }

    fn qs() -> QuadSettings {
        QuadSettings::default()
    }

    #[test]
    fn constants_examples() {
        let c = constants(&cfg(2, 2.0, 2.0), 0.0).unwrap();
        assert!((c.c1 - 1.0).abs() < 1e-14 && c.c2 == 1.0);
        let c = constants(&cfg(14, 3.0, 5.0), 6.0).unwrap();
        assert!((c.c1 - 1.0 / 3.0).abs() < 1e-15 && c.c2 == 2.5);
        // n2 = 2: Γ(k)Γ(k+1+m')/(Γ(k+1)Γ(k+m')) − 1 = m'/k.
        let c = constants(&cfg(7, 3.0, 2.0), 1.25).unwrap();
        assert!((c.c1 - 2.25 / 1.5).abs() < 1e-13 && c.c2 == 1.0);
        assert!(constants(&cfg(2, 2.0, 2.0), 1.0).is_err());
    }

    #[test]
    fn thm1_equality_case() {
        for p in [2, 4, 8] {
            let r = thm1_condition(&cfg(p, 2.0, 2.0), 0.0, &qs()).unwrap();
            assert!(r.margin.abs() < 1e-9, "p={p}: {}", r.margin);
            assert!(r.holds);
        }
    }

    #[test]
    fn thm1_examples() {
        assert!(thm1_condition(&cfg(14, 3.0, 3.0), 6.0, &qs()).unwrap().holds);
        let r = thm1_condition(&cfg(2, 2.0, 2.0), 0.5, &qs()).unwrap();
        assert!(r.margin > 1e-6);
    }

    #[test]
    fn cor1_i_simulation_cases() {
        for (n1, n2) in [(3.0, 3.0), (3.0, 5.0), (5.0, 3.0), (5.0, 5.0)] {
            let c = cfg(14, n1, n2);
            assert!(cor1_i_condition(&c, 6.0).unwrap().holds, "({n1},{n2}) a=6");
            assert!(!cor1_i_condition(&c, 0.0).unwrap().holds, "({n1},{n2}) a=0");
        }
    }

    #[test]
    fn cor2_examples() {
        let v = cor2_verdict(&cfg(4, 2.0, 2.0), 1.0, &qs()).unwrap();
        assert_eq!(v.holds, Verdict::ProvenDominates);
        let v = cor2_verdict(&cfg(4, 2.0, 2.0), -0.5, &qs()).unwrap();
        assert_eq!(v.holds, Verdict::ProvenFailsNecessary);
        let v = cor2_verdict(&cfg(2, 2.0, 2.0), 0.0, &qs()).unwrap();
        assert_eq!(v.holds, Verdict::ProvenDominates);
        assert!(v.margin.unwrap().abs() < 1e-9);
        assert!(cor2_verdict(&cfg(2, 2.0, 3.0), 0.0, &qs()).is_err());
    }

    #[test]
    fn cor2_agrees_with_thm1() {
        for &(n1, p, a) in &[(3.0, 4, 0.0), (5.0, 6, -1.0), (4.0, 3, 1.2), (2.0, 2, 0.5)] {
            let c = cfg(p, n1, 2.0);
            let t = thm1_condition(&c, a, &qs()).unwrap();
            let v = cor2_verdict(&c, a, &qs()).unwrap();
            assert!((t.margin - v.margin.unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn applicability() {
        assert!(thm3_applicable(&cfg(14, 3.0, 3.0), 0.0));
        assert!(!thm3_applicable(&cfg(14, 2.0, 3.0), 0.0));
        assert!(!thm3_applicable(&cfg(14, 5.0, 3.0), -0.1));
        assert!(thm4_applicable(&cfg(2, 2.0, 2.0), 0.0));
        assert!(!thm4_applicable(&cfg(1, 2.0, 2.0), -0.5));
        assert!(thm4_applicable(&cfg(14, 3.0, 3.0), 6.0));
    }

    #[test]
    fn report_examples() {
        let c = cfg(14, 3.0, 3.0);
        let h = |b, a| PriorSpec::Hierarchical(HyperParams::new(b, a, &c).unwrap());
        let v = dominance_report(&h(1.0, 0.0), &c, &qs()).unwrap();
        assert_eq!((v.holds, v.fired_by), (Verdict::ProvenDominates, Some(Condition::Thm3)));
        let v = dominance_report(&h(1.5, 0.0), &c, &qs()).unwrap();
        assert_eq!(v.holds, Verdict::Inconclusive);
        let v = dominance_report(&h(1.5, 6.0), &c, &qs()).unwrap();
        assert_eq!(
            (v.holds, v.fired_by),
            (Verdict::ProvenDominates, Some(Condition::Cor1i))
        );
        let v = dominance_report(&h(0.8, 6.0), &c, &qs()).unwrap();
        assert_eq!((v.holds, v.fired_by), (Verdict::Inconclusive, None));

        let c2 = cfg(4, 3.0, 2.0);
        let p = PriorSpec::Hierarchical(HyperParams::new(1.5, -0.5, &c2).unwrap());
        let v = dominance_report(&p, &c2, &qs()).unwrap();
        assert_eq!(
            (v.holds, v.fired_by),
            (Verdict::ProvenFailsNecessary, Some(Condition::Cor2))
        );
        assert!(dominance_report(&PriorSpec::Reference, &c, &qs()).is_err());
    }

    #[test]
    fn cor1_ii_consistency() {
        for &(n1, n2, p) in &[
            (2.0, 2.0, 2),
            (3.0, 1.5, 6),
            (3.0, 5.0, 14),
            (6.0, 4.0, 3),
            (2.5, 2.0, 10),
        ] {
            let c = cfg(p, n1, n2);
            let r = cor1_ii_condition(&c).unwrap();
            if r.holds {
                assert!(
                    thm1_condition(&c, c.half_p() - 1e-4, &qs()).unwrap().holds,
                    "({n1},{n2},{p})"
                );
            }
        }
    }
}
