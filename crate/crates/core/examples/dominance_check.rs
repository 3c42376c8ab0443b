//! Dominance verdicts for the four priors of the p = 14 simulation design.
//!
//! Run with `cargo run --example dominance_check`.

use chisq_predictive::dominance::{cor1_ii_condition, dominance_report};
use chisq_predictive::model::ModelConfig;
use chisq_predictive::predictive::{HyperParams, PriorSpec};
use chisq_predictive::specfn::QuadSettings;

fn main() -> chisq_predictive::Result<()> {
    let settings = QuadSettings::default();
    for (n1, n2) in [(3.0, 3.0), (3.0, 5.0), (5.0, 3.0), (5.0, 5.0), (2.0, 2.0)] {
        let config = ModelConfig::new(14, n1, n2)?;
        println!("n1 = {n1}, n2 = {n2}, p = 14");
        for (b, a) in [(n1 / 2.0, 0.0), (n1 / 2.0, 6.0), (1.0, 0.0), (1.0, 6.0)] {
            let prior = PriorSpec::Hierarchical(HyperParams::new(b, a, &config)?);
            let v = dominance_report(&prior, &config, &settings)?;
            let margin = v.margin.map_or("-".to_string(), |m| format!("{m:+.3e}"));
            let fired = v.fired_by.map_or("-".to_string(), |c| format!("{c:?}"));
            println!(
                "  b = {b:<4} a = {a:<3} {:<22} {fired:<7} margin {margin}",
                format!("{:?}", v.holds)
            );
        }
        let c = cor1_ii_condition(&config)?;
        println!("  some a near p/2 dominates: {} (margin {:+.3e})", c.holds, c.margin);
    }
    Ok(())
}
