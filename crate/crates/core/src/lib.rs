//! Bayesian predictive densities for a chi-squared observable `W` when the
//! side information is a normal vector `X ~ N_p(mu, I/eta)` and a chi-squared
//! variable `V ~ chi2(n1)/eta` sharing the unknown scale `eta`.
//!
//! The crate is organised bottom-up:
//!
//! * [`specfn`]: log-gamma, digamma, regularized incomplete beta and its
//!   inverse, a Gauss hypergeometric evaluator for negative arguments, and
//!   tanh-sinh quadrature against beta weights.
//! * [`model`]: the sampling model, its log-densities and seeded samplers.
//! * [`predictive`]: the reference and hierarchical predictive densities.
//! * [`dominance`]: numerical checks of the sufficient (and, for `n2 = 2`,
//!   necessary) conditions under which the hierarchical density beats the
//!   reference one.
//! * [`risk`]: Monte Carlo and semi-analytic Kullback-Leibler risks.
//! * [`cli`]: the command-line front end used by the `chisq-predictive` binary.
//!
//! ```
//! use chisq_predictive::model::{ModelConfig, Observation};
//! use chisq_predictive::predictive::{log_predictive, HyperParams, PriorSpec};
//!
//! let config = ModelConfig::new(14, 3.0, 3.0).unwrap();
//! let obs = Observation::new(20.0, 2.5).unwrap();
//! let prior = PriorSpec::Hierarchical(HyperParams::new(1.0, 6.0, &config).unwrap());
//! let log_density = log_predictive(1.0, &obs, &prior, &config).unwrap();
//! assert!(log_density.is_finite());
//! ```

pub mod cli;
pub mod dominance;
mod error;
pub mod model;
pub mod predictive;
pub mod risk;
pub mod specfn;

pub use error::{Error, Result};
