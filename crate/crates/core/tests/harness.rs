use serde_json::json;

use sgdm_lab::harness::{
    generalization_floor, run_experiment, Experiment, ExperimentConfig, Status,
};
use sgdm_lab::ObjectiveConstants;

fn config(experiment: Experiment, patch: serde_json::Value) -> ExperimentConfig {
    ExperimentConfig::from_value(experiment, patch).unwrap()
}

#[test]
fn identical_contraction_starts_are_degenerate() {
    let cfg = config(
        Experiment::Contraction,
        json!({"horizon": 2.0, "contraction": {"init_b": {"m": [1.0], "x": [1.0]}}}),
    );
    let out = run_experiment(&cfg).unwrap();
    assert_eq!(out.verdict("contraction").unwrap().status, Status::Degenerate);
    assert!(!out.all_pass());
}

#[test]
fn noiseless_one_step_error_is_second_order() {
    // Without noise both laws are point masses, so halving eta quarters W1.
    let cfg = config(
        Experiment::OneStepCheck,
        json!({
            "model": {"beta": 0.0},
            "noise": {"kind": "additive_gaussian", "scale": 0.0},
            "ensemble_size": 16,
            "ladder": {"eta": [0.04, 0.02, 0.01, 0.005]},
            "tolerances": {"slope_min": 1.9, "slope_max": 2.1}
        }),
    );
    let out = run_experiment(&cfg).unwrap();
    let v = out.verdict("slope").unwrap();
    let signal = v.metrics["signal"].as_array().unwrap();
    for w in signal.windows(2) {
        let ratio = w[0].as_f64().unwrap() / w[1].as_f64().unwrap();
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }
    assert!(v.passed(), "{v:?}");
}

#[test]
fn friction_below_contraction_threshold_is_rejected() {
    let err = ExperimentConfig::from_value(Experiment::RateW1, json!({"model": {"gamma": 1.0}}));
    assert!(err.is_err());
}

#[test]
fn tv_runs_reject_large_dimension() {
    let err = ExperimentConfig::from_value(Experiment::RateTv, json!({"objective": {"dim": 3}}));
    assert!(err.is_err());
}

#[test]
fn changed_tolerance_changes_hash() {
    let a = config(Experiment::RateW1, json!({}));
    let b = config(Experiment::RateW1, json!({"tolerances": {"slope_max": 0.8}}));
    assert_ne!(a.hash(), b.hash());
    assert_eq!(a.hash(), config(Experiment::RateW1, json!({})).hash());
}

#[test]
fn schedule_check_reports_polynomial_burn_in() {
    let cfg = config(
        Experiment::ScheduleCheck,
        json!({"schedule": {"kind": "polynomial", "eta": 0.5, "alpha": 0.5, "theta": 0.1, "omega": 0.05}}),
    );
    let out = run_experiment(&cfg).unwrap();
    let v = out.verdict("step_conditions").unwrap();
    assert!(v.metrics.contains_key("smallest_valid_n0"));
    assert!(out.verdict("weighted_sum_grid").unwrap().passed());
}

#[test]
fn generalization_floor_example() {
    let c = ObjectiveConstants::new(0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 2.0, 1.0, 4.0, 1.0, 0.0).unwrap();
    let j = generalization_floor(&c, 0.5, 2).unwrap();
    assert!((j - 0.1058).abs() < 5e-5);
    assert!(generalization_floor(&c, 0.0, 2).is_err());
}

#[test]
fn excess_risk_ordered_along_temperature_ladder() {
    let cfg = config(
        Experiment::Generalization,
        json!({"steps": 2000, "ensemble_size": 2000, "model": {"beta": 1.0},
               "ladder": {"beta": [0.5, 0.25]}}),
    );
    let out = run_experiment(&cfg).unwrap();
    assert!(out.verdict("beta_monotone").unwrap().passed());
}

#[test]
fn stationary_check_flags_a_wrong_band() {
    let cfg = config(
        Experiment::StationaryCheck,
        json!({"ensemble_size": 2000, "reference": {"include_sgdm": false, "em_ensemble": 500},
               "tolerances": {"exact_var_rel_tol": 1e-6}}),
    );
    let out = run_experiment(&cfg).unwrap();
    assert!(!out.verdict("exact_var_m").unwrap().passed());
}
