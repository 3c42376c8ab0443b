//! Special functions and beta-weighted quadrature.
//!
//! | function | meaning |
//! |---|---|
//! | [`log_gamma`] | `ln Γ(x)` |
//! | [`digamma`], [`digamma_diff`] | `ψ(x)` and `ψ(ξ₁) − ψ(ξ₂)` |
//! | [`reg_inc_beta`], [`ln_reg_inc_beta`], [`inv_reg_inc_beta`] | `Beta(α, β)` CDF, its log and quantile |
//! | [`gauss_2f1_negz`] | `₂F₁(a, b; c; z)` for `z ≤ 0` |
//! | [`integrate_beta_weighted`] | `∫₀¹ γ^{α−1}(1−γ)^{β−1} f(γ) dγ` by tanh-sinh |
//!
//! Everything here is a pure function and may be called from any thread.

mod gamma;
mod hyper;
mod incbeta;
mod quad;

pub use gamma::{digamma, digamma_diff, log_beta, log_gamma};
pub use hyper::gauss_2f1_negz;
pub use incbeta::{inv_reg_inc_beta, ln_reg_inc_beta, reg_inc_beta};
pub use quad::{
    beta_expectation, beta_expectation_split, integrate_beta_weighted, integrate_beta_weighted_split,
    integrate_half_line, integrate_unit, QuadSettings,
};

pub(crate) use gamma::{ln_beta, ln_gamma, psi};
pub(crate) use incbeta::{ln_reg_inc_beta_split, small_q_log_correction};
