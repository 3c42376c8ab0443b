//! Digamma, incomplete beta and its inverse, and the Euler-integral 2F1.
//!
//! Run with `cargo run --example special_functions`.

use chisq_predictive::specfn::{
    digamma, digamma_diff, gauss_2f1_negz, integrate_beta_weighted, inv_reg_inc_beta, log_gamma, reg_inc_beta,
    QuadSettings,
};

fn main() -> chisq_predictive::Result<()> {
    println!(
        "ln Γ(0.5)       = {:.15}  (ln √π = {:.15})",
        log_gamma(0.5)?,
        0.5 * std::f64::consts::PI.ln()
    );
    println!("ψ(1)            = {:.15}", digamma(1.0)?);
    println!("ψ(17.5) − ψ(9.5) = {:.15}", digamma_diff(17.5, 9.5)?);

    let (alpha, beta) = (7.0, 1.5);
    for q in [0.1, 0.5, 0.9] {
        let omega = reg_inc_beta(q, alpha, beta)?;
        let back = inv_reg_inc_beta(omega, alpha, beta)?;
        println!("I_{q}({alpha}, {beta}) = {omega:.15e}   inverse -> {back:.15}");
    }

    // ₂F₁(1, 1; 2; −z) = ln(1 + z)/z.
    let z = 3.0;
    println!(
        "2F1(1,1;2;−3)   = {:.15}  (ln 4 / 3 = {:.15})",
        gauss_2f1_negz(1.0, 1.0, 2.0, -z)?,
        4f64.ln() / z
    );

    // B(α, β) by tanh-sinh with the endpoint singularities in the weight.
    let b = integrate_beta_weighted(|_| 1.0, 0.3, 0.7, &QuadSettings::default())?;
    println!(
        "B(0.3, 0.7)     = {b:.15}  (π / sin(0.3π) = {:.15})",
        std::f64::consts::PI / (0.3 * std::f64::consts::PI).sin()
    );
    Ok(())
}
