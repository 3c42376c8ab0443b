//! Identities and inequalities the predictive densities and risk formulas
//! rely on, checked through independent code paths.

use chisq_predictive::specfn::{
    beta_expectation, digamma, digamma_diff, integrate_beta_weighted, inv_reg_inc_beta, log_beta, log_gamma,
    reg_inc_beta, QuadSettings,
};
use proptest::prelude::*;

fn qs() -> QuadSettings {
    QuadSettings::default()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// `∫₀¹ γ^{ξ₁−1}(1 + cγ)^{−ξ₁−ξ₂} dγ` by quadrature.
fn incbeta_integral(x1: f64, x2: f64, c: f64) -> f64 {
    integrate_beta_weighted(|g| (-(x1 + x2) * (c * g).ln_1p()).exp(), x1, 1.0, &qs()).unwrap()
}

/// `c^{−ξ₁} B(ξ₁, ξ₂) I_{c/(1+c)}(ξ₁, ξ₂)`.
fn incbeta_closed(x1: f64, x2: f64, c: f64) -> f64 {
    (-x1 * c.ln() + log_beta(x1, x2).unwrap()).exp() * reg_inc_beta(c / (1.0 + c), x1, x2).unwrap()
}

/// `E[ln(1 + cρ)]` for `ρ ~ Beta(ξ₁, ξ₂)`.
fn log_expectation(x1: f64, x2: f64, c: f64) -> f64 {
    beta_expectation(|r| (c * r).ln_1p(), x1, x2, &qs()).unwrap()
}

/// `∫₀¹ ρ^{−1}(1−ρ)^{ξ₁+ξ₂−1}[1 − (1 + cρ)^{−ξ₁}] dρ`.
fn log_expectation_integral(x1: f64, x2: f64, c: f64) -> f64 {
    integrate_beta_weighted(
        |r| {
            if r == 0.0 {
                x1 * c
            } else {
                -(-x1 * (c * r).ln_1p()).exp_m1() / r
            }
        },
        1.0,
        x1 + x2,
        &qs(),
    )
    .unwrap()
}

#[test]
fn incbeta_identity_fixed_point() {
    assert!(rel_err(incbeta_integral(1.5, 2.0, 3.0), incbeta_closed(1.5, 2.0, 3.0)) < 1e-10);
}

#[test]
fn log_expectation_hand_value() {
    let expected = 2.0 * 2f64.ln() - 1.0;
    assert!((log_expectation(1.0, 1.0, 1.0) - expected).abs() < 1e-12);
    assert!((log_expectation_integral(1.0, 1.0, 1.0) - expected).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn incbeta_identity_random(x1 in 0.1f64..10.0, x2 in 0.1f64..10.0, c in 0.1f64..10.0) {
        let (l, r) = (incbeta_integral(x1, x2, c), incbeta_closed(x1, x2, c));
        prop_assert!(rel_err(l, r) < 1e-8, "{} vs {}", l, r);
    }

    #[test]
    fn log_expectation_identity_random(x1 in 0.1f64..10.0, x2 in 0.1f64..10.0, c in 0.1f64..10.0) {
        let (l, r) = (log_expectation(x1, x2, c), log_expectation_integral(x1, x2, c));
        prop_assert!(rel_err(l, r) < 1e-7, "{} vs {}", l, r);
    }
}

/// Lower bound on `∫₀¹ (1−γ)^{ξ₂₁−1} γ^{ξ₁−1} (1 − cγ/(1+c))^{ξ₂₂} dγ`.
fn beta_integral_bound(x1: f64, x21: f64, x22: f64, c: f64) -> f64 {
    let b = log_beta(x21 + x22, x1).unwrap().exp();
    if x22 <= 1.0 {
        let ratio = (log_gamma(x21).unwrap() + log_gamma(x21 + x22 + x1).unwrap()
            - log_gamma(x21 + x22).unwrap()
            - log_gamma(x21 + x1).unwrap())
        .exp();
        b * (1.0 + (ratio - 1.0) / (1.0 + c))
    } else {
        b * (1.0 + x1 / (x21 + x22 - 1.0) / (1.0 + c)).powf(x22)
    }
}

fn beta_integral(x1: f64, x21: f64, x22: f64, c: f64) -> f64 {
    let q = c / (1.0 + c);
    integrate_beta_weighted(|g| (x22 * (-q * g).ln_1p()).exp(), x1, x21, &qs()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn beta_integral_lower_bound(x1 in 0.1f64..8.0, x21 in 0.1f64..8.0, x22 in 0.1f64..4.0, c in 0.01f64..50.0) {
        let (l, b) = (beta_integral(x1, x21, x22, c), beta_integral_bound(x1, x21, x22, c));
        prop_assert!(l >= b * (1.0 - 1e-10), "ξ=({}, {}, {}), c={}: {} < {}", x1, x21, x22, c, l, b);
    }
}

#[test]
fn beta_integral_bound_both_branches() {
    for &(x1, x21, x22, c) in &[
        (2.0, 1.5, 0.5, 1.0),
        (2.0, 1.5, 1.0, 3.0),
        (0.7, 3.0, 2.5, 0.2),
        (5.0, 0.4, 7.0, 9.0),
    ] {
        assert!(beta_integral(x1, x21, x22, c) >= beta_integral_bound(x1, x21, x22, c));
    }
}

#[test]
fn digamma_diff_on_log_grid() {
    let grid: Vec<f64> = (0..25).map(|i| 10f64.powf(-2.0 + 5.0 * i as f64 / 24.0)).collect();
    for &a in &grid {
        for &b in grid.iter().step_by(3) {
            let d = digamma_diff(a, b).unwrap();
            let e = digamma(a).unwrap() - digamma(b).unwrap();
            assert!((d - e).abs() <= 1e-10 * (1.0 + e.abs()), "ψ({a}) − ψ({b}): {d} vs {e}");
        }
    }
}

#[test]
fn digamma_diff_direct_partial_sum() {
    // Σ_{i<N} (ξ₁−ξ₂)/((i+ξ₁)(i+ξ₂)) with the tail ≈ (ξ₁−ξ₂)/N.
    let (a, b) = (3.7, 0.45);
    let n = 2_000_000;
    let s: f64 = (0..n).map(|i| (a - b) / ((i as f64 + a) * (i as f64 + b))).sum();
    let tail = (a - b) / (n as f64 + 0.5 * (a + b) - 0.5);
    assert!((s + tail - digamma_diff(a, b).unwrap()).abs() < 1e-11);
}

fn quantile_ratio_is_monotone(x1: f64, x21: f64, x22: f64) -> (bool, bool) {
    let ratios: Vec<f64> = (1..1000)
        .map(|i| {
            let w = i as f64 / 1000.0;
            inv_reg_inc_beta(w, x1, x22).unwrap() / inv_reg_inc_beta(w, x1, x21).unwrap()
        })
        .collect();
    let nondecreasing = ratios.windows(2).all(|p| p[1] >= p[0] * (1.0 - 1e-9));
    let strictly_somewhere = ratios.windows(2).any(|p| p[1] > p[0] * (1.0 + 1e-9));
    (nondecreasing, strictly_somewhere)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn quantile_ratio_monotone_random(x1 in 0.2f64..8.0, x21 in 1.01f64..6.0, gap in 0.05f64..6.0) {
        let (mono, strict) = quantile_ratio_is_monotone(x1, x21, x21 + gap);
        prop_assert!(mono && strict);
    }
}

/// `ln[Γ((h+1)τ)Γ(τ+ξ) / (Γ(τ)Γ((h+1)τ+ξ))]`.
fn gamma_log_ratio(h: f64, xi: f64, tau: f64) -> f64 {
    log_gamma((h + 1.0) * tau).unwrap() + log_gamma(tau + xi).unwrap()
        - log_gamma(tau).unwrap()
        - log_gamma((h + 1.0) * tau + xi).unwrap()
}

#[test]
fn gamma_ratio_derivative_sign() {
    let step = 1e-5;
    for h in [1.0, 2.0, 3.0] {
        for xi in [1.0, 1.5, 3.0] {
            for i in 0..60 {
                let tau = 0.1 + 9.9 * i as f64 / 59.0;
                let d = (gamma_log_ratio(h, xi, tau + step) - gamma_log_ratio(h, xi, tau - step)) / (2.0 * step);
                if xi == 1.0 {
                    assert!(d.abs() < 1e-7, "h={h} τ={tau}: {d}");
                    assert!((gamma_log_ratio(h, xi, tau) + (h + 1.0).ln()).abs() < 1e-12);
                } else {
                    assert!(d < 0.0, "h={h} ξ={xi} τ={tau}: {d}");
                }
            }
        }
    }
}
