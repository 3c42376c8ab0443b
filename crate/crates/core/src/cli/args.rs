//! Flag definitions and `--config` merging.
//!
//! Each subcommand's flags double as the schema of its `--config` file: a flat
//! JSON object whose keys are the flag names without the leading dashes.
//! Flags given on the command line win over the file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "chisq-predictive",
    version,
    about = "Predictive densities for a chi-squared observable: evaluation, dominance checks and KL risk"
)]
pub struct Cli {
    /// Run inside a pool of this many worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a predictive density at one point.
    Density(DensityArgs),
    /// Check the dominance conditions for a hierarchical prior.
    Check(CheckArgs),
    /// Estimate the KL risk on a grid of theta values.
    Risk(RiskArgs),
    /// Run the four-panel simulation grid (p = 14).
    Figure1(Figure1Args),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorKind {
    Ref,
    Hier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BModeArg {
    Half,
    One,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Monte Carlo.
    Mc,
    /// Poisson mixture of quadratures (b = 1, or b = n1/2 with n2 = 2).
    Semi,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct DensityArgs {
    /// Flat JSON file of defaults for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Reference or hierarchical prior.
    #[arg(long, value_enum)]
    pub prior: Option<PriorKind>,
    /// How b is chosen: n1/2, 1, or the value of --b.
    #[arg(long, value_enum)]
    pub b_mode: Option<BModeArg>,
    /// Hyperparameter b > 0 (implies --b-mode general).
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Hyperparameter a < p/2.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Degrees of freedom of V.
    #[arg(long)]
    pub n1: Option<f64>,
    /// Degrees of freedom of W.
    #[arg(long)]
    pub n2: Option<f64>,
    /// Dimension of X.
    #[arg(long)]
    pub p: Option<u32>,
    /// Observed V.
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Point at which the density is evaluated.
    #[arg(long, allow_negative_numbers = true)]
    pub w: Option<f64>,
    /// Observed squared norm of X.
    #[arg(long, allow_negative_numbers = true)]
    pub xnormsq: Option<f64>,
    /// Relative tolerance of the quadrature.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the JSON record here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CheckArgs {
    /// Flat JSON file of defaults for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// How b is chosen: n1/2, 1, or the value of --b.
    #[arg(long, value_enum)]
    pub b_mode: Option<BModeArg>,
    /// Hyperparameter b > 0 (implies --b-mode general).
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Hyperparameter a < p/2.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Degrees of freedom of V.
    #[arg(long)]
    pub n1: Option<f64>,
    /// Degrees of freedom of W.
    #[arg(long)]
    pub n2: Option<f64>,
    /// Dimension of X.
    #[arg(long)]
    pub p: Option<u32>,
    /// Relative tolerance of the quadrature.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write the JSON record here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RiskArgs {
    /// Flat JSON file of defaults for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Reference or hierarchical prior.
    #[arg(long, value_enum)]
    pub prior: Option<PriorKind>,
    /// How b is chosen: n1/2, 1, or the value of --b.
    #[arg(long, value_enum)]
    pub b_mode: Option<BModeArg>,
    /// Hyperparameter b > 0 (implies --b-mode general).
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Hyperparameter a < p/2.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Degrees of freedom of V.
    #[arg(long)]
    pub n1: Option<f64>,
    /// Degrees of freedom of W.
    #[arg(long)]
    pub n2: Option<f64>,
    /// Dimension of X.
    #[arg(long)]
    pub p: Option<u32>,
    /// Comma-separated noncentralities.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub theta: Option<Vec<f64>>,
    /// Monte Carlo replications per theta [default: 20000].
    #[arg(long)]
    pub reps: Option<usize>,
    /// Base seed [default: 20240601].
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    /// Relative tolerance of the quadrature.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Write CSV here (plus `<out>.manifest.json`) instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Figure1Args {
    /// Flat JSON file of defaults for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Monte Carlo replications per cell [default: 20000].
    #[arg(long)]
    pub reps: Option<usize>,
    /// Use 100000 replications per cell.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub paper_scale: bool,
    /// Base seed [default: 20240601].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Relative tolerance of the quadrature.
    #[arg(long)]
    pub tol: Option<f64>,
    /// CSV destination; the manifest goes to `<out>.manifest.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Overlays `flags` on the contents of `flags.config`, if any.
pub fn merge_config<T>(flags: T, config: Option<&PathBuf>) -> Result<T, CliError>
where
    T: Serialize + DeserializeOwned,
{
    let Some(path) = config else { return Ok(flags) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("--config: cannot read {}: {e}", path.display())))?;
    let mut base: Map<String, Value> = serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("--config: {} is not a JSON object: {e}", path.display())))?;
    let Value::Object(overrides) = serde_json::to_value(&flags).map_err(|e| CliError::Validation(e.to_string()))?
    else {
        unreachable!("flag structs serialize to objects")
    };
    for (key, value) in overrides {
        if !value.is_null() {
            base.insert(key, value);
        }
    }
    serde_json::from_value(Value::Object(base))
        .map_err(|e| CliError::Validation(format!("--config: {}: {e}", path.display())))
}
