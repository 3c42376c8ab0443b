//! The four-panel risk grid (p = 14, θ ∈ {0, 20, 40, 60}) printed as a table.
//!
//! Run with `cargo run --release --example figure1_grid -- [reps]`.

use chisq_predictive::predictive::PriorChoice;
use chisq_predictive::risk::{paper_grid, run_experiment};

fn main() -> chisq_predictive::Result<()> {
    let reps = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5_000);
    let rows = run_experiment(&paper_grid(reps, 1))?;
    let mut current = None;
    for row in &rows {
        let key = (row.config.n1, row.config.n2);
        if current != Some(key) {
            current = Some(key);
            println!(
                "\n(n1, n2) = ({}, {})   baseline R0 = {:.4}",
                key.0, key.1, row.ref_risk
            );
        }
        let label = match row.prior {
            PriorChoice::Reference => "reference".to_string(),
            PriorChoice::Hierarchical { b_mode, a } => format!("b={} a={a}", b_mode.as_str()),
        };
        match (&row.estimate, &row.error) {
            (Some(e), _) => println!(
                "  {label:<14} θ = {:>4}  {:.4} ± {:.4}  {}",
                row.theta,
                e.mean,
                e.std_error.unwrap_or(f64::NAN),
                row.verdict.as_ref().map_or(String::new(), |v| format!("{:?}", v.holds))
            ),
            (None, Some(err)) => println!("  {label:<14} θ = {:>4}  error: {err}", row.theta),
            (None, None) => unreachable!(),
        }
    }
    Ok(())
}
