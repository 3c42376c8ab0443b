//! Kullback–Leibler risk of predictive densities.
//!
//! The risk of `p̂` at `(mu, eta)` is `E[ln p₂(W | eta) − ln p̂(W; X, V)]` in
//! nats. It depends on the parameters only through `theta = eta‖mu‖²`, so
//! simulations fix `eta = 1`.

mod experiment;
mod monte_carlo;
mod semi_analytic;

pub use experiment::{paper_grid, run_experiment, ExperimentConfig, ExperimentRow};
pub use monte_carlo::{mc_risk, mc_risk_at, mc_risk_difference, mc_risk_materialized, RiskEstimate};
pub use semi_analytic::{poisson_truncation_cap, riskdiff_b1, riskdiff_n2eq2, riskdiff_n2eq2_term};

use crate::model::ModelConfig;
use crate::specfn::{ln_beta, ln_gamma, psi};

/// Constant risk of the reference predictive density:
/// `−ln Γ(l) − l + ln B(k, l) − k ψ(k) + (k + l) ψ(k + l)` with `k = n1/2`,
/// `l = n2/2`. Independent of `p`.
pub fn ref_risk_constant(config: &ModelConfig) -> f64 {
    let k = 0.5 * config.n1;
    let l = 0.5 * config.n2;
    -ln_gamma(l) - l + ln_beta(k, l) - k * psi(k) + (k + l) * psi(k + l)
}
