//! Monte Carlo risk against closed forms, semi-analytic differences and the
//! dominance verdicts.

use chisq_predictive::dominance::{dominance_report, thm1_condition, Verdict};
use chisq_predictive::model::{ModelConfig, SimulationPoint};
use chisq_predictive::predictive::{HyperParams, PriorSpec};
use chisq_predictive::risk::{
    mc_risk, mc_risk_at, mc_risk_difference, mc_risk_materialized, ref_risk_constant, riskdiff_b1, riskdiff_n2eq2,
    riskdiff_n2eq2_term,
};
use chisq_predictive::specfn::QuadSettings;

fn qs() -> QuadSettings {
    QuadSettings::default()
}

fn hier(b: f64, a: f64, c: &ModelConfig) -> PriorSpec {
    PriorSpec::Hierarchical(HyperParams::new(b, a, c).unwrap())
}

#[test]
fn risk_depends_only_on_theta() {
    let c = ModelConfig::new(4, 3.0, 3.0).unwrap();
    let theta = 8.0;
    for prior in [PriorSpec::Reference, hier(1.5, 1.0, &c), hier(1.0, 0.5, &c)] {
        let unit = mc_risk_at(
            &prior,
            &c,
            &SimulationPoint::unit_scale(theta).unwrap(),
            20_000,
            11,
            &qs(),
        )
        .unwrap();
        for eta in [0.5, 2.0] {
            let point = SimulationPoint::new(theta, eta).unwrap();
            let full = mc_risk_materialized(&prior, &c, &point, 20_000, 12, &qs()).unwrap();
            let se = unit.std_error.unwrap().hypot(full.std_error.unwrap());
            assert!(
                (unit.mean - full.mean).abs() < 3.0 * se,
                "{prior:?} η={eta}: {} vs {}",
                unit.mean,
                full.mean
            );
        }
    }
}

#[test]
fn proven_dominance_shows_in_simulation() {
    let mut checked = 0;
    for (n1, n2, p) in [(3.0, 3.0, 14), (2.0, 2.0, 4), (4.0, 2.0, 6), (5.0, 1.5, 3)] {
        let c = ModelConfig::new(p, n1, n2).unwrap();
        let r0 = ref_risk_constant(&c);
        for (b, a) in [
            (1.0, 0.0),
            (1.0, c.half_p() - 1.0),
            (0.5 * n1, 0.0),
            (0.5 * n1, c.half_p() - 0.5),
        ] {
            let Ok(hp) = HyperParams::new(b, a, &c) else { continue };
            let prior = PriorSpec::Hierarchical(hp);
            if dominance_report(&prior, &c, &qs()).unwrap().holds != Verdict::ProvenDominates {
                continue;
            }
            for theta in [0.0, 10.0, 40.0] {
                let r = mc_risk(&prior, &c, theta, 10_000, 5).unwrap();
                assert!(r.mean <= r0 + 3.0 * r.std_error.unwrap(), "{c:?} b={b} a={a} θ={theta}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 20);
}

#[test]
fn semi_analytic_matches_paired_monte_carlo() {
    let cells: [(u32, f64, f64, f64, f64, bool); 6] = [
        (14, 3.0, 3.0, 6.0, 20.0, true),
        (6, 5.0, 1.0, 1.0, 5.0, true),
        (3, 2.0, 4.0, -0.5, 0.0, true),
        (6, 3.0, 2.0, 2.0, 10.0, false),
        (4, 2.0, 2.0, 0.5, 3.0, false),
        (8, 5.0, 2.0, -1.0, 30.0, false),
    ];
    for (p, n1, n2, a, theta, b_one) in cells {
        let c = ModelConfig::new(p, n1, n2).unwrap();
        let (prior, exact) = if b_one {
            (hier(1.0, a, &c), riskdiff_b1(&c, a, theta, &qs()).unwrap())
        } else {
            (hier(0.5 * n1, a, &c), riskdiff_n2eq2(&c, a, theta, &qs()).unwrap())
        };
        let point = SimulationPoint::unit_scale(theta).unwrap();
        let mc = mc_risk_difference(&prior, &PriorSpec::Reference, &c, &point, 20_000, 21, &qs()).unwrap();
        let se = mc.std_error.unwrap();
        assert!(
            (mc.mean - exact).abs() < 3.0 * se,
            "{c:?} a={a} θ={theta}: {exact} vs {} ± {se}",
            mc.mean
        );
    }
}

#[test]
fn thm3_equality_at_origin() {
    let c = ModelConfig::new(14, 3.0, 3.0).unwrap();
    assert!(riskdiff_b1(&c, 0.0, 0.0, &qs()).unwrap().abs() < 1e-8);
    assert!(riskdiff_b1(&c, 0.0, 5.0, &qs()).unwrap() < -1e-4);
    assert!(riskdiff_b1(&c, 6.0, 20.0, &qs()).unwrap() <= 0.0);
}

#[test]
fn poisson_terms_nonpositive_and_rise_after_minimum() {
    for (n1, p, a) in [(3.0, 6, 2.0), (2.0, 4, 0.5), (6.0, 10, 3.0)] {
        let c = ModelConfig::new(p, n1, 2.0).unwrap();
        assert!(thm1_condition(&c, a, &qs()).unwrap().holds);
        let terms: Vec<f64> = (0..=50)
            .map(|z| riskdiff_n2eq2_term(&c, a, z, &qs()).unwrap())
            .collect();
        assert!(terms.iter().all(|&t| t <= 1e-12), "n1={n1} p={p} a={a}");
        let argmin = terms.iter().enumerate().min_by(|x, y| x.1.total_cmp(y.1)).unwrap().0;
        assert!(terms[argmin..].windows(2).all(|w| w[1] >= w[0] - 1e-12));
        assert!(terms[50].abs() < terms[argmin].abs());
    }
}

#[test]
fn n2eq2_difference_vanishes() {
    let c = ModelConfig::new(6, 3.0, 2.0).unwrap();
    let near = riskdiff_n2eq2(&c, 2.0, 10.0, &qs()).unwrap();
    let far = riskdiff_n2eq2(&c, 2.0, 1000.0, &qs()).unwrap();
    assert!(near <= 0.0 && far <= 0.0 && far.abs() < near.abs());
}
