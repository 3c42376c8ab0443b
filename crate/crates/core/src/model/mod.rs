//! The sampling model.
//!
//! `X ~ N_p(mu, I/eta)`, `V ~ chi2(n1)/eta` and the target `W ~ chi2(n2)/eta`
//! are mutually independent. Only `‖X‖²` and `V` enter any predictive
//! density, so [`Observation`] stores those two numbers.

mod sampling;

pub use sampling::{sample_chi_squared, sample_gamma, sample_observation, sample_poisson, RandomStream};

use serde::{Deserialize, Serialize};

use crate::specfn::ln_gamma;
use crate::{Error, Result};

/// Dimension of `X` and the degrees of freedom of `V` and `W`.
///
/// Degrees of freedom may be any positive real; `V` and `W` are then gamma
/// variables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub p: u32,
    pub n1: f64,
    pub n2: f64,
}

impl ModelConfig {
    pub fn new(p: u32, n1: f64, n2: f64) -> Result<Self> {
        let config = ModelConfig { p, n1, n2 };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p < 1 {
            return Err(Error::validation("p", "dimension must be at least 1"));
        }
        if !(self.n1 > 0.0 && self.n1.is_finite()) {
            return Err(Error::validation("n1", format!("{} must be positive", self.n1)));
        }
        if !(self.n2 > 0.0 && self.n2.is_finite()) {
            return Err(Error::validation("n2", format!("{} must be positive", self.n2)));
        }
        Ok(())
    }

    /// Half-parameters `k = n1/2`, `l = n2/2`, `m = p/2`, `m' = p/2 − a`.
    pub fn shape(&self, a: f64) -> ShapeParams {
        ShapeParams {
            k: 0.5 * self.n1,
            l: 0.5 * self.n2,
            m: 0.5 * self.p as f64,
            m_prime: 0.5 * self.p as f64 - a,
        }
    }

    pub fn half_p(&self) -> f64 {
        0.5 * self.p as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    pub k: f64,
    pub l: f64,
    pub m: f64,
    pub m_prime: f64,
}

/// Sufficient data `(‖x‖², v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub x_norm_sq: f64,
    pub v: f64,
}

impl Observation {
    pub fn new(x_norm_sq: f64, v: f64) -> Result<Self> {
        let obs = Observation { x_norm_sq, v };
        obs.validate()?;
        Ok(obs)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x_norm_sq >= 0.0 && self.x_norm_sq.is_finite()) {
            return Err(Error::validation(
                "x_norm_sq",
                format!("{} must be finite and >= 0", self.x_norm_sq),
            ));
        }
        if !(self.v > 0.0 && self.v.is_finite()) {
            return Err(Error::validation("v", format!("{} must be positive", self.v)));
        }
        Ok(())
    }
}

/// A point in parameter space, reduced to the noncentrality
/// `theta = eta‖mu‖²` and the scale `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationPoint {
    pub theta: f64,
    pub eta: f64,
}

impl SimulationPoint {
    pub fn new(theta: f64, eta: f64) -> Result<Self> {
        let point = SimulationPoint { theta, eta };
        point.validate()?;
        Ok(point)
    }

    /// `eta = 1`, the convention used by every simulation in this crate.
    pub fn unit_scale(theta: f64) -> Result<Self> {
        Self::new(theta, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::validation(
                "theta",
                format!("{} must be finite and >= 0", self.theta),
            ));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::validation("eta", format!("{} must be positive", self.eta)));
        }
        Ok(())
    }
}

/// Log-density of `chi2(dof)/eta` at `x`.
fn log_scaled_chi2(func: &'static str, x: f64, eta: f64, dof: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(func, format!("argument {x} must be positive")));
    }
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::domain(func, format!("eta = {eta} must be positive")));
    }
    let h = 0.5 * dof;
    Ok(h * (0.5 * eta).ln() - ln_gamma(h) + (h - 1.0) * x.ln() - 0.5 * eta * x)
}

/// `ln p₂(w | eta)`, the density of the target `W ~ chi2(n2)/eta`.
pub fn log_p2(w: f64, eta: f64, config: &ModelConfig) -> Result<f64> {
    log_scaled_chi2("log_p2", w, eta, config.n2)
}

/// `ln p₁(v | eta)`, the density of `V ~ chi2(n1)/eta`.
pub fn log_p1(v: f64, eta: f64, config: &ModelConfig) -> Result<f64> {
    log_scaled_chi2("log_p1", v, eta, config.n1)
}

/// `‖x‖²` for a full observation vector of length `p`.
pub fn sufficient_reduce(x: &[f64], config: &ModelConfig) -> Result<f64> {
    if x.len() != config.p as usize {
        return Err(Error::validation(
            "x",
            format!("length {} does not match p = {}", x.len(), config.p),
        ));
    }
    Ok(x.iter().map(|xi| xi * xi).sum())
}
