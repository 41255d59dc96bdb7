//! Harness-level behaviour on small but real experiments.

use linbandit::adversarial::{run_adversarial_episode, AdversarialConfig};
use linbandit::algorithms::PolicyKind;
use linbandit::environments::Family;
use linbandit::harness::run::{run_experiment, sensitivity_sweep};
use linbandit::harness::ExperimentConfig;

#[test]
fn over_conservative_quantile_costs_regret() {
    let mut cfg = ExperimentConfig::standard(Family::P3 { seed: 2024 }, 20, 1000, 5, "unused");
    cfg.policies.retain(|p| p.kind == PolicyKind::LinBUCB);
    let rows = sensitivity_sweep(&cfg, &[0.6, 0.999]).unwrap();
    for label in ["LinBUCB", "LinBUCB_Approximate"] {
        let at = |g: f64| {
            rows.iter()
                .find(|r| r.policy == label && r.gamma == g)
                .unwrap()
                .mean_final
        };
        assert!(at(0.999) >= at(0.6), "{label}: {} < {}", at(0.999), at(0.6));
    }
}

#[test]
fn sweep_shares_streams_with_plain_runs() {
    let mut cfg = ExperimentConfig::standard(Family::P1, 4, 50, 3, "unused");
    cfg.n_arms = 5;
    cfg.policies.retain(|p| p.kind == PolicyKind::LinBUCB);
    let rows = sensitivity_sweep(&cfg, &[0.6]).unwrap();
    let direct = run_experiment(&cfg).unwrap();
    for a in &direct.aggregates {
        let row = rows.iter().find(|r| r.policy == a.policy).unwrap();
        assert_eq!(row.mean_final, a.mean_final());
    }
}

#[test]
fn bucb_adversary_forces_the_worse_arm_every_step() {
    let cfg = AdversarialConfig::new(PolicyKind::LinBUCB, 2.0, 0.1, 200);
    let ep = run_adversarial_episode(&cfg, 3).unwrap();
    assert!(ep.trace.instantaneous.iter().all(|&r| r == 1.0));
    assert!(ep.budget_held);
    assert!(ep.max_divergence <= 0.1);
}

#[test]
fn ts_adversary_certificates_hold_each_step() {
    let cfg = AdversarialConfig::new(PolicyKind::LinTS, 2.0, 0.1, 200);
    let ep = run_adversarial_episode(&cfg, 4).unwrap();
    assert_eq!(ep.certificates.len(), 200);
    for c in &ep.certificates {
        assert!(c.divergence <= 0.1);
        assert!(c.divergence <= c.analytic_bound + 1e-6);
        assert!((c.total_mass - 1.0).abs() <= 1e-9);
    }
}
