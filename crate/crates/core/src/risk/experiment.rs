//! Risk curves over a grid of models, priors and noncentralities.

use serde::{Deserialize, Serialize};

use super::{mc_risk_at, ref_risk_constant, RiskEstimate};
use crate::dominance::{dominance_report, DominanceVerdict};
use crate::model::{ModelConfig, SimulationPoint};
use crate::predictive::{BMode, PriorChoice, PriorSpec};
use crate::specfn::QuadSettings;
use crate::{Error, Result};

/// A grid of risk estimates. Every cell uses the same seed, so all priors
/// are scored on common random numbers.
///
/// With `baseline` set, each model also gets one reference-prior row at the
/// first grid value of `theta`; its risk does not depend on `theta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub configs: Vec<ModelConfig>,
    pub priors: Vec<PriorChoice>,
    pub theta_grid: Vec<f64>,
    pub reps: usize,
    pub seed: u64,
    #[serde(default)]
    pub baseline: bool,
    #[serde(default)]
    pub settings: QuadSettings,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.configs.is_empty() {
            return Err(Error::validation("configs", "must not be empty"));
        }
        if self.priors.is_empty() {
            return Err(Error::validation("priors", "must not be empty"));
        }
        if self.theta_grid.is_empty() {
            return Err(Error::validation("theta", "grid must not be empty"));
        }
        if self.reps == 0 {
            return Err(Error::validation("reps", "must be at least 1"));
        }
        for c in &self.configs {
            c.validate()?;
        }
        for &t in &self.theta_grid {
            SimulationPoint::unit_scale(t)?;
        }
        self.settings.validate()
    }
}

/// One cell of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub config: ModelConfig,
    pub prior: PriorChoice,
    /// Resolved `b`, absent for the reference prior.
    pub b: Option<f64>,
    pub a: Option<f64>,
    pub theta: f64,
    pub reps: usize,
    pub seed: u64,
    pub estimate: Option<RiskEstimate>,
    pub ref_risk: f64,
    pub verdict: Option<DominanceVerdict>,
    pub error: Option<String>,
}

/// The simulation design with four `(n1, n2)` cases, `p = 14`,
/// `(b, a) ∈ {n1/2, 1} × {0, 6}` and `theta ∈ {0, 20, 40, 60}`.
pub fn paper_grid(reps: usize, seed: u64) -> ExperimentConfig {
    let configs = [(3.0, 3.0), (3.0, 5.0), (5.0, 3.0), (5.0, 5.0)]
        .into_iter()
        .map(|(n1, n2)| ModelConfig { p: 14, n1, n2 })
        .collect();
    let priors = [
        (BMode::Half, 0.0),
        (BMode::Half, 6.0),
        (BMode::One, 0.0),
        (BMode::One, 6.0),
    ]
    .into_iter()
    .map(|(b_mode, a)| PriorChoice::Hierarchical { b_mode, a })
    .collect();
    ExperimentConfig {
        configs,
        priors,
        theta_grid: vec![0.0, 20.0, 40.0, 60.0],
        reps,
        seed,
        baseline: true,
        settings: QuadSettings::default(),
    }
}

/// Runs every `(config, prior, theta)` cell, the baseline row first within
/// each config. A failing cell records its error and the run continues.
pub fn run_experiment(exp: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    exp.validate()?;
    let mut rows = Vec::new();
    for config in &exp.configs {
        let ref_risk = ref_risk_constant(config);
        let mut cells: Vec<(PriorChoice, &[f64])> = Vec::new();
        if exp.baseline {
            cells.push((PriorChoice::Reference, &exp.theta_grid[..1]));
        }
        cells.extend(exp.priors.iter().map(|&p| (p, &exp.theta_grid[..])));
        for (choice, thetas) in cells {
            let resolved = choice.resolve(config);
            let verdict = match &resolved {
                Ok(prior @ PriorSpec::Hierarchical(_)) => Some(dominance_report(prior, config, &exp.settings)),
                _ => None,
            };
            let (b, a) = match &resolved {
                Ok(PriorSpec::Hierarchical(hp)) => (Some(hp.b), Some(hp.a)),
                _ => match choice {
                    PriorChoice::Hierarchical { b_mode, a } => (Some(b_mode.resolve(config)), Some(a)),
                    PriorChoice::Reference => (None, None),
                },
            };
            for &theta in thetas {
                let outcome = resolved.clone().and_then(|prior| {
                    let point = SimulationPoint::unit_scale(theta)?;
                    mc_risk_at(&prior, config, &point, exp.reps, exp.seed, &exp.settings)
                });
                let mut errors = Vec::new();
                let estimate = outcome.map_err(|e| errors.push(e.to_string())).ok();
                let verdict = match &verdict {
                    Some(Ok(v)) => Some(v.clone()),
                    Some(Err(e)) => {
                        errors.push(format!("dominance check: {e}"));
                        None
                    }
                    None => None,
                };
                rows.push(ExperimentRow {
                    config: *config,
                    prior: choice,
                    b,
                    a,
                    theta,
                    reps: exp.reps,
                    seed: exp.seed,
                    estimate,
                    ref_risk,
                    verdict,
                    error: (!errors.is_empty()).then(|| errors.join("; ")),
                });
            }
        }
    }
    Ok(rows)
}
