//! Monte Carlo KL risk against the closed-form risk of the reference density,
//! and the same estimate from a different worker count.
//!
//! Run with `cargo run --release --example monte_carlo_risk`.

use chisq_predictive::model::ModelConfig;
use chisq_predictive::predictive::{HyperParams, PriorSpec};
use chisq_predictive::risk::{mc_risk, ref_risk_constant};

fn main() -> chisq_predictive::Result<()> {
    let config = ModelConfig::new(14, 3.0, 3.0)?;
    let r0 = ref_risk_constant(&config);
    let reps = 20_000;
    let seed = 7;
    println!("R0 = {r0:.6}");

    let priors = [
        ("reference", PriorSpec::Reference),
        (
            "b=1, a=0",
            PriorSpec::Hierarchical(HyperParams::new(1.0, 0.0, &config)?),
        ),
        (
            "b=1, a=6",
            PriorSpec::Hierarchical(HyperParams::new(1.0, 6.0, &config)?),
        ),
    ];
    for theta in [0.0, 20.0, 60.0] {
        for (name, prior) in &priors {
            let r = mc_risk(prior, &config, theta, reps, seed)?;
            let se = r.std_error.unwrap_or(f64::NAN);
            println!(
                "θ = {theta:>4}  {name:<10} {:.5} ± {:.5}  (R0 {:+.2} SE)",
                r.mean,
                se,
                (r.mean - r0) / se
            );
        }
    }

    let prior = &priors[2].1;
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .expect("thread pool")
        .install(|| mc_risk(prior, &config, 20.0, 2_000, seed))?;
    let default = mc_risk(prior, &config, 20.0, 2_000, seed)?;
    println!(
        "1 thread vs default pool bit-identical: {}",
        single.mean.to_bits() == default.mean.to_bits()
    );
    Ok(())
}
