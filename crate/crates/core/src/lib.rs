//! Simulation and verification toolkit for stochastic gradient descent with
//! momentum viewed as a discretization of underdamped Langevin dynamics.
//!
//! The crate evolves SGDm, the frozen-drift intermediate system and the
//! Langevin diffusion from shared noise streams, and measures how far their
//! laws drift apart with empirical Wasserstein and total-variation
//! estimators. The [`harness`] module wires these into reproducible
//! experiments with CSV and JSON outputs.

pub mod assignment;
pub mod dynamics;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod lyapunov;
pub mod metrics;
pub mod noise;
pub mod objective;
pub mod schedule;

pub use dynamics::{
    coupled_contraction_pair, evolve_ensemble, exact_ou_step, intermediate_step,
    langevin_em_step, sgdm_step, EnsembleRun, EnsembleSpec, ModelParams, OuTransition, State,
    System,
};
pub use error::{Error, Result};
pub use lyapunov::{generator_apply_v, lyapunov_value, LyapunovParams};
pub use metrics::{
    empirical_moment, rate_fit, tv_histogram, w1_1d, w1_exact_small, w1_sliced, Ensemble,
    RateFit,
};
pub use noise::{NoiseMode, NoiseStream, StepDraws};
pub use objective::{GradNoiseModel, Objective, ObjectiveConstants, ObjectiveKind};
pub use schedule::{ScheduleKind, StepSchedule};
