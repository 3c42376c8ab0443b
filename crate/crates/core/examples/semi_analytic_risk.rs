//! Risk differences from the Poisson-mixture formulas next to paired Monte
//! Carlo estimates on the same design.
//!
//! Run with `cargo run --release --example semi_analytic_risk`.

use chisq_predictive::model::{ModelConfig, SimulationPoint};
use chisq_predictive::predictive::{HyperParams, PriorSpec};
use chisq_predictive::risk::{mc_risk_difference, riskdiff_b1, riskdiff_n2eq2};
use chisq_predictive::specfn::QuadSettings;

fn main() -> chisq_predictive::Result<()> {
    let s = QuadSettings::default();
    let reps = 20_000;

    println!("b = 1, n1 = 3, n2 = 3, p = 14");
    let config = ModelConfig::new(14, 3.0, 3.0)?;
    for (a, theta) in [(0.0, 0.0), (0.0, 20.0), (6.0, 20.0), (6.0, 60.0)] {
        let exact = riskdiff_b1(&config, a, theta, &s)?;
        let prior = PriorSpec::Hierarchical(HyperParams::new(1.0, a, &config)?);
        let mc = mc_risk_difference(
            &prior,
            &PriorSpec::Reference,
            &config,
            &SimulationPoint::unit_scale(theta)?,
            reps,
            3,
            &s,
        )?;
        println!(
            "  a = {a}  θ = {theta:>4}  Δ = {exact:+.6}   MC {:+.6} ± {:.6}",
            mc.mean,
            mc.std_error.unwrap_or(0.0)
        );
    }

    println!("b = n1/2, n1 = 3, n2 = 2, p = 6");
    let config = ModelConfig::new(6, 3.0, 2.0)?;
    for (a, theta) in [(2.0, 0.0), (2.0, 10.0), (0.0, 10.0), (-1.0, 10.0)] {
        let exact = riskdiff_n2eq2(&config, a, theta, &s)?;
        let prior = PriorSpec::Hierarchical(HyperParams::new(1.5, a, &config)?);
        let mc = mc_risk_difference(
            &prior,
            &PriorSpec::Reference,
            &config,
            &SimulationPoint::unit_scale(theta)?,
            reps,
            3,
            &s,
        )?;
        println!(
            "  a = {a:>4}  θ = {theta:>4}  Δ = {exact:+.6}   MC {:+.6} ± {:.6}",
            mc.mean,
            mc.std_error.unwrap_or(0.0)
        );
    }
    Ok(())
}
