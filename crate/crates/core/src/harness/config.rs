//! Experiment configuration: per-experiment presets, JSON overlay and the
//! canonical config hash.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::dynamics::{ModelParams, State, System};
use crate::error::{Error, Result};
use crate::noise::NoiseMode;
use crate::objective::{GradNoiseModel, Objective, ObjectiveConfig, ObjectiveKind};
use crate::schedule::{ScheduleKind, StepSchedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Simulate,
    RateW1,
    RateTv,
    Contraction,
    DriftCheck,
    ScheduleCheck,
    StationaryCheck,
    OneStepCheck,
    Generalization,
    MomentEnvelope,
}

impl Experiment {
    pub const ALL: [Experiment; 10] = [
        Experiment::Simulate,
        Experiment::RateW1,
        Experiment::RateTv,
        Experiment::Contraction,
        Experiment::DriftCheck,
        Experiment::ScheduleCheck,
        Experiment::StationaryCheck,
        Experiment::OneStepCheck,
        Experiment::Generalization,
        Experiment::MomentEnvelope,
    ];

    /// Kebab-case CLI name.
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::RateW1 => "rate-w1",
            Experiment::RateTv => "rate-tv",
            Experiment::Contraction => "contraction",
            Experiment::DriftCheck => "drift-check",
            Experiment::ScheduleCheck => "schedule-check",
            Experiment::StationaryCheck => "stationary-check",
            Experiment::OneStepCheck => "one-step-check",
            Experiment::Generalization => "generalization",
            Experiment::MomentEnvelope => "moment-envelope",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        let norm = name.replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|e| e.name() == norm)
            .ok_or_else(|| Error::Config(format!("unknown experiment {name:?}")))
    }

    /// Experiments that require the contraction friction regime.
    pub fn needs_contraction_regime(self) -> bool {
        matches!(
            self,
            Experiment::RateW1 | Experiment::RateTv | Experiment::Contraction
        )
    }
}

/// Friction, temperature and mini-batch size; the dimension comes from the
/// objective block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelBlock {
    pub gamma: f64,
    pub beta: f64,
    pub batch: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    /// Base step sizes.
    pub eta: Vec<f64>,
    /// Mini-batch sizes, evaluated at the smallest `eta`.
    pub batch: Vec<usize>,
    /// Temperatures (generalization).
    pub beta: Vec<f64>,
    /// Polynomial exponents (schedule check).
    pub alpha: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    /// Optimal assignment; needs ensembles of at most 512 points.
    Exact,
    Sliced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorBlock {
    pub kind: EstimatorKind,
    pub projections: usize,
    pub bins: usize,
    /// Histogram box half-width in pooled standard deviations.
    pub box_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBlock {
    /// Euler–Maruyama substep is `η_min / substep_ratio` for non-quadratic
    /// objectives.
    pub substep_ratio: usize,
    /// Substep of the Euler–Maruyama check against the exact transition.
    pub em_delta: f64,
    pub em_horizon: f64,
    pub em_ensemble: usize,
    /// Whether the stationary check also runs a long SGDm ensemble.
    pub include_sgdm: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionBlock {
    /// Second initial point; defaults to the negated first one.
    pub init_b: Option<State>,
    pub delta: f64,
    pub record_every: usize,
    /// The log-distance fit uses `t ≥ fit_from · horizon`.
    pub fit_from: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChecksBlock {
    pub points: usize,
    pub radius: f64,
    pub k_max: usize,
    /// TV runs require `η₁ ≤ step_constant / d²`.
    pub step_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationBlock {
    /// Fresh seeds checked against the calibrated envelope.
    pub seeds: usize,
    /// Horizon of the calibration run estimating the stationary level.
    pub horizon: f64,
}

/// Verdict thresholds; part of the hashed config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub slope_min: f64,
    pub slope_max: f64,
    /// Largest-step signal must exceed this multiple of the noise floor.
    pub floor_multiple: f64,
    pub r2_min: f64,
    pub theta_rel_tol: f64,
    pub blowup_max: f64,
    pub var_rel_tol: f64,
    pub exact_var_rel_tol: f64,
    /// Euler–Maruyama vs exact distance limit, in noise floors.
    pub em_floor_multiple: f64,
    pub envelope_slack: f64,
    pub risk_multiple: f64,
    pub drift_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub objective: ObjectiveConfig,
    pub noise: GradNoiseModel,
    pub model: ModelBlock,
    pub schedule: StepSchedule,
    pub noise_mode: NoiseMode,
    /// Initial point; defaults to all ones.
    pub init: Option<State>,
    pub ensemble_size: usize,
    /// Target time `t_n`.
    pub horizon: f64,
    /// Step count overriding `horizon`.
    pub steps: Option<usize>,
    pub seed: u64,
    /// System evolved by `simulate`.
    pub system: System,
    /// Snapshot spacing in steps for `simulate` and `moment-envelope`;
    /// 0 records only the final step.
    pub record_every: usize,
    pub ladder: Ladder,
    pub estimator: EstimatorBlock,
    pub reference: ReferenceBlock,
    pub contraction: ContractionBlock,
    pub checks: ChecksBlock,
    pub calibration: CalibrationBlock,
    pub tolerances: Tolerances,
}

fn base_preset() -> Value {
    serde_json::json!({
        "objective": {"dim": 2, "kind": "quadratic_well", "scale": 1.0},
        "noise": {"kind": "additive_gaussian", "scale": 1.0},
        "model": {"gamma": 5.0, "beta": 1.0, "batch": 10},
        "schedule": {"kind": "constant", "eta": 0.1, "omega": 0.5, "theta": 1.0, "burn_in": 1},
        "noise_mode": "brownian_derived",
        "init": null,
        "ensemble_size": 20000,
        "horizon": 20.0,
        "steps": null,
        "seed": 1,
        "system": "sgdm",
        "record_every": 0,
        "ladder": {
            "eta": [0.1, 0.05, 0.025, 0.0125],
            "batch": [],
            "beta": [],
            "alpha": [0.25, 0.5, 0.75]
        },
        "estimator": {"kind": "sliced", "projections": 256, "bins": 64, "box_width": 5.0},
        "reference": {
            "substep_ratio": 64,
            "em_delta": 1e-3,
            "em_horizon": 5.0,
            "em_ensemble": 10000,
            "include_sgdm": true
        },
        "contraction": {"init_b": null, "delta": 1e-3, "record_every": 10, "fit_from": 0.1},
        "checks": {"points": 10000, "radius": 10.0, "k_max": 1000000, "step_constant": 1.0},
        "calibration": {"seeds": 5, "horizon": 50.0},
        "tolerances": {
            "slope_min": 0.35,
            "slope_max": 0.7,
            "floor_multiple": 3.0,
            "r2_min": 0.9,
            "theta_rel_tol": 0.02,
            "blowup_max": 0.01,
            "var_rel_tol": 0.1,
            "exact_var_rel_tol": 0.05,
            "em_floor_multiple": 2.0,
            "envelope_slack": 1.1,
            "risk_multiple": 3.0,
            "drift_tol": 1e-9
        }
    })
}

/// Default configuration of an experiment, as JSON.
pub fn preset_value(experiment: Experiment) -> Value {
    let mut v = base_preset();
    let patch = match experiment {
        Experiment::Simulate => serde_json::json!({
            "ensemble_size": 1000,
            "horizon": 10.0,
            "record_every": 10
        }),
        Experiment::RateW1 => serde_json::json!({}),
        Experiment::RateTv => serde_json::json!({
            "objective": {"dim": 1},
            "ensemble_size": 50000,
            "horizon": 5.0,
            "ladder": {"batch": [1, 100]}
        }),
        Experiment::Contraction => serde_json::json!({
            "objective": {"dim": 1},
            "horizon": 20.0
        }),
        Experiment::DriftCheck => serde_json::json!({}),
        Experiment::ScheduleCheck => serde_json::json!({
            "schedule": {"kind": "constant", "eta": 0.01},
            "ladder": {"eta": [0.01, 0.05, 0.1, 0.25, 0.5]}
        }),
        Experiment::StationaryCheck => serde_json::json!({
            "objective": {"dim": 1},
            "model": {"batch": 1},
            "schedule": {"kind": "constant", "eta": 0.005},
            "horizon": 200.0,
            "tolerances": {"var_rel_tol": 0.1}
        }),
        Experiment::OneStepCheck => serde_json::json!({
            "objective": {"dim": 1},
            "model": {"gamma": 1.0, "beta": 1.0, "batch": 1},
            "init": {"m": [1.0], "x": [1.0]},
            "ensemble_size": 100000,
            "ladder": {"eta": [0.2, 0.1, 0.05, 0.025]},
            "tolerances": {"slope_min": 1.2, "slope_max": 1.8}
        }),
        Experiment::Generalization => serde_json::json!({
            "model": {"beta": 0.25},
            "schedule": {"kind": "constant", "eta": 0.01},
            "steps": 10000,
            "ensemble_size": 5000
        }),
        Experiment::MomentEnvelope => serde_json::json!({
            "schedule": {"kind": "constant", "eta": 0.01},
            "ensemble_size": 10000,
            "horizon": 20.0,
            "record_every": 10
        }),
    };
    merge(&mut v, patch);
    if let Value::Object(map) = &mut v {
        map.insert("experiment".into(), serde_json::to_value(experiment).expect("enum"));
    }
    v
}

/// Recursive object merge; non-object values in `patch` replace `base`.
pub fn merge(base: &mut Value, patch: Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                match b.get_mut(&k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

impl ExperimentConfig {
    pub fn preset(experiment: Experiment) -> Self {
        serde_json::from_value(preset_value(experiment)).expect("presets deserialize")
    }

    /// Overlays a user JSON document on the experiment's preset.
    pub fn from_json(experiment: Experiment, json: &str) -> Result<Self> {
        let patch: Value = serde_json::from_str(json)?;
        Self::from_value(experiment, patch)
    }

    pub fn from_value(experiment: Experiment, patch: Value) -> Result<Self> {
        if let Some(declared) = patch.get("experiment") {
            let declared: Experiment = serde_json::from_value(declared.clone())
                .map_err(|e| Error::Config(format!("experiment field: {e}")))?;
            if declared != experiment {
                return Err(Error::Config(format!(
                    "config declares experiment {} but {} was requested",
                    declared.name(),
                    experiment.name()
                )));
            }
        }
        let mut v = preset_value(experiment);
        merge(&mut v, patch);
        let cfg: Self =
            serde_json::from_value(v).map_err(|e| Error::Config(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn dim(&self) -> usize {
        self.objective.dim
    }

    pub fn params(&self) -> Result<ModelParams> {
        ModelParams::new(self.model.gamma, self.model.beta, self.model.batch, self.dim())
    }

    pub fn build_objective(&self) -> Result<Objective> {
        self.objective.build(&self.noise)
    }

    pub fn init_state(&self) -> Result<State> {
        match &self.init {
            Some(s) => {
                let s = State::new(s.m.clone(), s.x.clone())?;
                if s.dim() != self.dim() {
                    return Err(Error::Config("init dimension must match the objective".into()));
                }
                Ok(s)
            }
            None => Ok(State::ones(self.dim())),
        }
    }

    /// The configured schedule with its base step replaced by `eta`.
    pub fn schedule_with_eta(&self, eta: f64) -> Result<StepSchedule> {
        let kind = match self.schedule.kind {
            ScheduleKind::Constant { .. } => ScheduleKind::Constant { eta },
            ScheduleKind::Polynomial { alpha, .. } => ScheduleKind::Polynomial { eta, alpha },
        };
        StepSchedule::new(kind, self.schedule.omega, self.schedule.theta, self.schedule.burn_in)
    }

    /// Grid index `n` of the final time for a schedule.
    pub fn final_step(&self, schedule: &StepSchedule) -> usize {
        self.steps.unwrap_or_else(|| schedule.steps_to_reach(self.horizon))
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self.objective.kind, ObjectiveKind::QuadraticWell { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let obj = self.build_objective()?;
        let p = self.params()?;
        self.noise.validate()?;
        self.schedule.validate()?;
        self.init_state()?;
        if self.experiment.needs_contraction_regime() {
            p.require_contraction_regime(&obj)?;
        }
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(Error::Config("horizon must be finite and >= 0".into()));
        }
        if self.ladder.eta.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
            return Err(Error::Config("ladder step sizes must be positive".into()));
        }
        if self.ladder.batch.contains(&0) {
            return Err(Error::Config("ladder batch sizes must be positive".into()));
        }
        if self.ladder.beta.iter().any(|b| !(*b >= 0.0 && b.is_finite())) {
            return Err(Error::Config("ladder temperatures must be >= 0".into()));
        }
        if self.estimator.projections == 0 || self.estimator.bins == 0 {
            return Err(Error::Config("estimator needs projections and bins >= 1".into()));
        }
        if self.reference.substep_ratio == 0 {
            return Err(Error::Config("substep_ratio must be at least 1".into()));
        }
        if !(self.reference.em_delta > 0.0 && self.contraction.delta > 0.0) {
            return Err(Error::Config("integration substeps must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.contraction.fit_from) {
            return Err(Error::Config("contraction.fit_from must lie in [0, 1)".into()));
        }
        let needs_ladder = matches!(
            self.experiment,
            Experiment::RateW1 | Experiment::RateTv | Experiment::OneStepCheck
        );
        if needs_ladder && self.ladder.eta.len() < 3 && self.experiment != Experiment::RateTv {
            return Err(Error::Config("rate fits need at least 3 ladder step sizes".into()));
        }
        if self.experiment == Experiment::RateTv {
            let d = self.dim();
            if d > 2 {
                return Err(Error::Config("histogram TV runs need d <= 2".into()));
            }
            let cap = self.checks.step_constant / (d * d) as f64;
            if let Some(big) = self.ladder.eta.iter().find(|e| **e > cap) {
                return Err(Error::Config(format!(
                    "TV runs need eta_1 <= c/d^2 = {cap}, ladder has {big}"
                )));
            }
        }
        Ok(())
    }

    /// Canonical JSON (sorted keys, compact).
    pub fn canonical_json(&self) -> String {
        let v = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string(&v).expect("value serializes")
    }

    /// SHA-256 of the canonical JSON, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }
}
