//! Every evaluator of the predictive density at one observation, plus a
//! normalization check by quadrature over `w`.
//!
//! Run with `cargo run --example predictive_density`.

use chisq_predictive::model::{ModelConfig, Observation};
use chisq_predictive::predictive::{
    hier_log_predictive_b1, hier_log_predictive_closed, hier_log_predictive_general, hier_log_predictive_half,
    log_predictive_with, ref_log_predictive, HyperParams, PriorSpec,
};
use chisq_predictive::specfn::{integrate_half_line, QuadSettings};

fn main() -> chisq_predictive::Result<()> {
    let config = ModelConfig::new(14, 3.0, 5.0)?;
    let obs = Observation::new(20.0, 2.5)?;
    let w = 1.7;
    let s = QuadSettings::default();
    let a = config.half_p() - 1.0;

    println!("reference            {:.15}", ref_log_predictive(w, &obs, &config)?);
    println!(
        "closed  (b=1, a=p/2-1) {:.15}",
        hier_log_predictive_closed(w, &obs, &config)?
    );
    println!(
        "b = 1                {:.15}",
        hier_log_predictive_b1(w, &obs, a, &config)?
    );
    let one = HyperParams::new(1.0, a, &config)?;
    println!(
        "general (b=1)        {:.15}",
        hier_log_predictive_general(w, &obs, &one, &config, &s)?
    );
    println!(
        "b = n1/2             {:.15}",
        hier_log_predictive_half(w, &obs, a, &config, &s)?
    );
    let half = HyperParams::new(1.5, a, &config)?;
    println!(
        "general (b=n1/2)     {:.15}",
        hier_log_predictive_general(w, &obs, &half, &config, &s)?
    );

    for prior in [
        PriorSpec::Reference,
        PriorSpec::Hierarchical(one),
        PriorSpec::Hierarchical(half),
    ] {
        let mass = integrate_half_line(
            |w| {
                if w == 0.0 {
                    0.0
                } else {
                    log_predictive_with(w, &obs, &prior, &config, &s).map_or(f64::NAN, |r| r.0.exp())
                }
            },
            &s,
        )?;
        let path = log_predictive_with(w, &obs, &prior, &config, &s)?.1;
        println!("∫ p̂ dw = {mass:.12}   ({})", path.as_str());
    }
    Ok(())
}
