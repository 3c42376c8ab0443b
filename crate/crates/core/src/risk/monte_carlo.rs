//! Monte Carlo risk estimation.
//!
//! Replication `i` draws from the substream `(seed, i)`, results are collected
//! in index order and summed with compensation, so an estimate is
//! bit-identical for any number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{log_p2, sample_observation, ModelConfig, Observation, RandomStream, SimulationPoint};
use crate::predictive::{log_predictive_with, PriorSpec};
use crate::specfn::QuadSettings;
use crate::{Error, Result};

/// A Monte Carlo mean with its standard error, both in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√reps`; `None` when `reps = 1`.
    pub std_error: Option<f64>,
    pub reps: usize,
    pub seed: u64,
}

/// Neumaier-compensated sum in slice order.
fn compensated_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn summarize(losses: &[f64], seed: u64) -> RiskEstimate {
    let n = losses.len();
    let mean = compensated_sum(losses.iter().copied()) / n as f64;
    let std_error = (n > 1).then(|| {
        let ss = compensated_sum(losses.iter().map(|x| (x - mean) * (x - mean)));
        (ss / (n - 1) as f64 / n as f64).sqrt()
    });
    RiskEstimate {
        mean,
        std_error,
        reps: n,
        seed,
    }
}

/// Runs `reps` replications of `loss` in parallel and summarizes them.
/// Any failing replication fails the whole estimate.
fn replicate<F>(reps: usize, seed: u64, loss: F) -> Result<RiskEstimate>
where
    F: Fn(&mut RandomStream) -> Result<f64> + Sync,
{
    if reps == 0 {
        return Err(Error::validation("reps", "must be at least 1"));
    }
    let results: Vec<Result<f64>> = (0..reps as u64)
        .into_par_iter()
        .map(|i| loss(&mut RandomStream::for_replication(seed, i)))
        .collect();
    let failed = results.iter().filter(|r| r.is_err()).count();
    if failed > 0 {
        let first = results
            .into_iter()
            .find_map(|r| r.err())
            .unwrap_or_else(|| unreachable!());
        return Err(Error::Replications {
            failed,
            reps,
            first: Box::new(first),
        });
    }
    let losses: Vec<f64> = results
        .into_iter()
        .map(|r| r.unwrap_or_else(|_| unreachable!()))
        .collect();
    Ok(summarize(&losses, seed))
}

fn loss(
    w: f64,
    obs: &Observation,
    eta: f64,
    prior: &PriorSpec,
    config: &ModelConfig,
    settings: &QuadSettings,
) -> Result<f64> {
    Ok(log_p2(w, eta, config)? - log_predictive_with(w, obs, prior, config, settings)?.0)
}

/// Monte Carlo risk at noncentrality `theta` (with `eta = 1`) using default
/// quadrature settings.
pub fn mc_risk(prior: &PriorSpec, config: &ModelConfig, theta: f64, reps: usize, seed: u64) -> Result<RiskEstimate> {
    let point = SimulationPoint::unit_scale(theta)?;
    mc_risk_at(prior, config, &point, reps, seed, &QuadSettings::default())
}

/// Monte Carlo risk at an arbitrary `(theta, eta)`.
pub fn mc_risk_at(
    prior: &PriorSpec,
    config: &ModelConfig,
    point: &SimulationPoint,
    reps: usize,
    seed: u64,
    settings: &QuadSettings,
) -> Result<RiskEstimate> {
    config.validate()?;
    point.validate()?;
    prior.validate(config)?;
    replicate(reps, seed, |stream| {
        let (obs, w) = sample_observation(point, config, stream);
        loss(w, &obs, point.eta, prior, config, settings)
    })
}

/// Paired estimate of `R(prior) − R(baseline)`: both densities are scored on
/// the same draws, which removes most of the sampling noise shared by the two
/// losses.
pub fn mc_risk_difference(
    prior: &PriorSpec,
    baseline: &PriorSpec,
    config: &ModelConfig,
    point: &SimulationPoint,
    reps: usize,
    seed: u64,
    settings: &QuadSettings,
) -> Result<RiskEstimate> {
    config.validate()?;
    point.validate()?;
    prior.validate(config)?;
    baseline.validate(config)?;
    replicate(reps, seed, |stream| {
        let (obs, w) = sample_observation(point, config, stream);
        let ours = log_predictive_with(w, &obs, prior, config, settings)?.0;
        let theirs = log_predictive_with(w, &obs, baseline, config, settings)?.0;
        Ok(theirs - ours)
    })
}

/// Monte Carlo risk with the full vector `X = mu + N_p(0, I)/√eta` drawn
/// explicitly, `mu = (√(theta/eta), 0, …, 0)`. Slower than [`mc_risk_at`] but
/// uses no distributional shortcut.
pub fn mc_risk_materialized(
    prior: &PriorSpec,
    config: &ModelConfig,
    point: &SimulationPoint,
    reps: usize,
    seed: u64,
    settings: &QuadSettings,
) -> Result<RiskEstimate> {
    config.validate()?;
    point.validate()?;
    prior.validate(config)?;
    let mu1 = (point.theta / point.eta).sqrt();
    let sd = point.eta.sqrt().recip();
    replicate(reps, seed, |stream| {
        let mut x_norm_sq = 0.0;
        for j in 0..config.p {
            let xj = if j == 0 { mu1 } else { 0.0 } + sd * stream.standard_normal();
            x_norm_sq += xj * xj;
        }
        let v = crate::model::sample_chi_squared(config.n1, stream) / point.eta;
        let w = crate::model::sample_chi_squared(config.n2, stream) / point.eta;
        loss(w, &Observation { x_norm_sq, v }, point.eta, prior, config, settings)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictive::HyperParams;
    use crate::risk::ref_risk_constant;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(xs.iter().copied()), 2.0);
    }

    #[test]
    fn single_rep_has_no_standard_error() {
        let c = ModelConfig::new(2, 2.0, 2.0).unwrap();
        let r = mc_risk(&PriorSpec::Reference, &c, 0.0, 1, 3).unwrap();
        assert!(r.std_error.is_none() && r.mean.is_finite());
        assert!(mc_risk(&PriorSpec::Reference, &c, 0.0, 0, 3).is_err());
    }

    #[test]
    fn reference_risk_matches_constant() {
        let c = ModelConfig::new(3, 3.0, 5.0).unwrap();
        let r = mc_risk(&PriorSpec::Reference, &c, 10.0, 20_000, 42).unwrap();
        let se = r.std_error.unwrap();
        assert!(
            (r.mean - ref_risk_constant(&c)).abs() < 3.0 * se,
            "{} vs {}",
            r.mean,
            ref_risk_constant(&c)
        );
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let c = ModelConfig::new(6, 3.0, 3.0).unwrap();
        let prior = PriorSpec::Hierarchical(HyperParams::new(1.5, 1.0, &c).unwrap());
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mc_risk(&prior, &c, 4.0, 500, 9).unwrap())
        };
        let (a, b) = (run(1), run(3));
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.unwrap().to_bits(), b.std_error.unwrap().to_bits());
    }

    #[test]
    fn failures_are_reported_not_dropped() {
        // A quadrature budget too small to converge makes every general-path
        // replication fail.
        let c = ModelConfig::new(4, 3.0, 3.0).unwrap();
        let prior = PriorSpec::Hierarchical(HyperParams::new(0.7, 0.0, &c).unwrap());
        let settings = QuadSettings {
            rel_tol: 1e-15,
            abs_tol: 0.0,
            max_refinement_level: 3,
        };
        let point = SimulationPoint::unit_scale(5.0).unwrap();
        match mc_risk_at(&prior, &c, &point, 20, 1, &settings) {
            Err(Error::Replications { failed, reps, .. }) => assert!(failed > 0 && reps == 20),
            other => panic!("expected replication failure, got {other:?}"),
        }
    }
}
