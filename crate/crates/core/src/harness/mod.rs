//! Experiment driver: configuration presets, the experiments themselves and
//! their CSV/JSON outputs.

mod checks;
pub mod config;
mod distance;
pub mod output;

use std::path::Path;

pub use checks::{
    generalization_floor, run_contraction, run_drift_check, run_generalization,
    run_moment_envelope, run_schedule_check, run_simulate, run_stationary_check,
};
pub use config::{Experiment, ExperimentConfig};
pub use distance::{run_one_step_check, run_rate_tv, run_rate_w1};
pub use output::{ExperimentOutput, Manifest, Status, Verdict};

use crate::error::Result;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::Simulate => run_simulate(cfg),
        Experiment::RateW1 => run_rate_w1(cfg),
        Experiment::RateTv => run_rate_tv(cfg),
        Experiment::Contraction => run_contraction(cfg),
        Experiment::DriftCheck => run_drift_check(cfg),
        Experiment::ScheduleCheck => run_schedule_check(cfg),
        Experiment::StationaryCheck => run_stationary_check(cfg),
        Experiment::OneStepCheck => run_one_step_check(cfg),
        Experiment::Generalization => run_generalization(cfg),
        Experiment::MomentEnvelope => run_moment_envelope(cfg),
    }
}

/// Runs an experiment and writes its outputs into `dir`; the overwrite check
/// happens before any simulation.
pub fn run_to_dir(cfg: &ExperimentConfig, dir: &Path, threads: usize) -> Result<(ExperimentOutput, Manifest)> {
    output::check_overwrite(dir, cfg)?;
    let out = run_experiment(cfg)?;
    let manifest = output::write_outputs(dir, cfg, &out, threads)?;
    Ok((out, manifest))
}
