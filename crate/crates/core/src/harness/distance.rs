//! Law-level distance experiments: the finite-horizon W1 rate, the TV
//! behavior along step and batch ladders, and the one-step W1 order.

use super::config::{EstimatorKind, Experiment, ExperimentConfig};
use super::output::{distance_table, DistanceRow, ExperimentOutput, Status, Verdict};
use crate::dynamics::{evolve_ensemble, EnsembleRun, EnsembleSpec, ModelParams, System};
use crate::error::{Error, Result};
use crate::metrics::{
    rate_fit, tv_histogram, w1_exact_small, w1_sliced_against, Ensemble, RangeBox, EXACT_W1_MAX,
};
use crate::noise::derive_seed;
use crate::objective::Objective;
use crate::schedule::StepSchedule;

/// Seed tags separating the roles of the ensembles of one experiment.
pub(crate) mod tag {
    pub const SGDM: u64 = 100;
    pub const REFERENCE: u64 = 200;
    pub const FLOOR: u64 = 300;
    pub const PROJECTIONS: u64 = 400;
    pub const COUPLING: u64 = 500;
    pub const RISK: u64 = 600;
    pub const CALIBRATION: u64 = 900;
    pub const FRESH: u64 = 1000;
}

pub(crate) struct Setup {
    pub objective: Objective,
    pub params: ModelParams,
}

impl Setup {
    pub fn new(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(Self {
            objective: cfg.build_objective()?,
            params: cfg.params()?,
        })
    }
}

/// Reference diffusion for a run: the exact transition for the quadratic
/// well, otherwise Euler–Maruyama with substep at most `η_min / ratio`.
pub(crate) fn reference_system(
    cfg: &ExperimentConfig,
    schedule: &StepSchedule,
    eta_min: f64,
) -> (System, usize) {
    if cfg.is_quadratic() {
        (System::ExactOu, 1)
    } else {
        let ratio = cfg.reference.substep_ratio as f64;
        let substeps = (ratio * schedule.base() / eta_min).ceil().max(1.0) as usize;
        (System::LangevinEm, substeps)
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn run_system(
    cfg: &ExperimentConfig,
    setup: &Setup,
    params: &ModelParams,
    system: System,
    schedule: &StepSchedule,
    seed: u64,
    count: usize,
    record_steps: Vec<usize>,
    substeps: usize,
) -> Result<EnsembleRun> {
    evolve_ensemble(&EnsembleSpec {
        system,
        schedule,
        params,
        objective: &setup.objective,
        noise: &cfg.noise,
        seed,
        mode: cfg.noise_mode,
        count,
        init: cfg.init_state()?,
        record_steps,
        substeps,
    })
}

pub(crate) fn final_ensemble(run: &EnsembleRun) -> Ensemble {
    run.last().map(|s| s.ensemble()).unwrap_or(Ensemble {
        dim: 0,
        points: Vec::new(),
        time_label: 0.0,
        excluded: 0,
    })
}

/// Truncates clouds to a common size so that W1 estimators apply.
fn common_prefix<'a>(clouds: &[&'a Ensemble]) -> Vec<&'a [Vec<f64>]> {
    let n = clouds.iter().map(|e| e.len()).min().unwrap_or(0);
    clouds.iter().map(|e| &e.points[..n]).collect()
}

/// W1 from each of `others` to `reference` with the configured estimator.
pub(crate) fn w1_against(
    cfg: &ExperimentConfig,
    reference: &Ensemble,
    others: &[&Ensemble],
) -> Result<(Vec<f64>, &'static str)> {
    let mut all = vec![reference];
    all.extend_from_slice(others);
    let clouds = common_prefix(&all);
    if clouds[0].is_empty() {
        return Err(Error::Argument("no valid trajectories to compare".into()));
    }
    let exact = cfg.estimator.kind == EstimatorKind::Exact && clouds[0].len() <= EXACT_W1_MAX;
    if exact {
        let d = clouds[1..]
            .iter()
            .map(|o| w1_exact_small(o, clouds[0]))
            .collect::<Result<Vec<_>>>()?;
        Ok((d, "exact_w1"))
    } else {
        let seed = derive_seed(cfg.seed, tag::PROJECTIONS);
        let d = w1_sliced_against(clouds[0], &clouds[1..], cfg.estimator.projections, seed)?;
        Ok((d, "sliced_w1"))
    }
}

pub(crate) fn blowup_verdict(cfg: &ExperimentConfig, runs: &[&EnsembleRun]) -> Verdict {
    let worst = runs.iter().map(|r| r.blowup_fraction()).fold(0.0, f64::max);
    let count: usize = runs.iter().map(|r| r.blowup_count()).sum();
    let status = if worst <= cfg.tolerances.blowup_max {
        Status::Pass
    } else {
        Status::Invalid
    };
    Verdict::with_status("blowups", status)
        .metric("blowup_count", count)
        .metric("worst_fraction", worst)
        .metric("limit", cfg.tolerances.blowup_max)
}

struct LadderPoint {
    time: f64,
    eta_n: f64,
    signal: f64,
    floor: f64,
}

const SLICED_NOTE: &str = "in dimension > 1 the sliced W1 surrogate lower-bounds W1; fitted slopes refer to the surrogate";

/// Finite-horizon W1 between SGDm and the reference diffusion along the step
/// ladder, floor-subtracted and fitted on a log-log scale.
pub fn run_rate_w1(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let setup = Setup::new(cfg)?;
    let eta_min = cfg.ladder.eta.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut rows = Vec::new();
    let mut points = Vec::new();
    let mut runs = Vec::new();
    let m = cfg.ensemble_size;

    let mut measure = |eta: f64, params: &ModelParams, slot: u64, label: String| -> Result<LadderPoint> {
        let schedule = cfg.schedule_with_eta(eta)?;
        let n = cfg.final_step(&schedule);
        let time = schedule.cumulative_time(n);
        let eta_n = schedule.eta(n.max(1))?;
        let (ref_sys, substeps) = reference_system(cfg, &schedule, eta_min);
        let sgdm = run_system(cfg, &setup, params, System::Sgdm, &schedule, derive_seed(cfg.seed, tag::SGDM + slot), m, vec![n], 1)?;
        let ref_a = run_system(cfg, &setup, params, ref_sys, &schedule, derive_seed(cfg.seed, tag::REFERENCE + slot), m, vec![n], substeps)?;
        let ref_b = run_system(cfg, &setup, params, ref_sys, &schedule, derive_seed(cfg.seed, tag::FLOOR + slot), m, vec![n], substeps)?;
        let (es, ea, eb) = (final_ensemble(&sgdm), final_ensemble(&ref_a), final_ensemble(&ref_b));
        let (d, est) = w1_against(cfg, &ea, &[&es, &eb])?;
        rows.push(DistanceRow {
            time,
            eta_n,
            estimator: format!("{est}{label}"),
            value: d[0],
            noise_floor: d[1],
            n_samples: es.len().min(ea.len()),
            seed: cfg.seed,
        });
        for (block, part_s, part_a, part_b) in [
            ("m", es.momentum(), ea.momentum(), eb.momentum()),
            ("x", es.position(), ea.position(), eb.position()),
        ] {
            let (dm, _) = w1_against(cfg, &part_a, &[&part_s, &part_b])?;
            rows.push(DistanceRow {
                time,
                eta_n,
                estimator: format!("{est}{label}:{block}"),
                value: dm[0],
                noise_floor: dm[1],
                n_samples: part_s.len(),
                seed: cfg.seed,
            });
        }
        runs.push(sgdm);
        runs.push(ref_a);
        runs.push(ref_b);
        Ok(LadderPoint {
            time,
            eta_n,
            signal: d[0],
            floor: d[1],
        })
    };

    for (i, &eta) in cfg.ladder.eta.iter().enumerate() {
        points.push(measure(eta, &setup.params, i as u64, String::new())?);
    }
    let mut batch_points = Vec::new();
    for (j, &batch) in cfg.ladder.batch.iter().enumerate() {
        let params = ModelParams { batch, ..setup.params };
        let p = measure(eta_min, &params, 50 + j as u64, format!(":N={batch}"))?;
        batch_points.push((batch, p));
    }

    let mut out = ExperimentOutput::new(Experiment::RateW1, distance_table(&rows));
    out.blowups = runs.iter().map(|r| r.blowup_count()).sum();
    let blowups = blowup_verdict(cfg, &runs.iter().collect::<Vec<_>>());
    let invalid = blowups.status == Status::Invalid;
    out.verdicts.push(blowups);
    out.verdicts.extend(rate_verdicts(cfg, &points, invalid));
    if !batch_points.is_empty() {
        out.verdicts.push(batch_monotone_verdict(&batch_points, invalid));
    }
    out.limitations.push(SLICED_NOTE.into());
    out.limitations.push(
        "the constants of the distance bound are not reproduced; only the order in the step size is tested".into(),
    );
    out.limitations.push(format!("fit times t_n: {:?}", points.iter().map(|p| p.time).collect::<Vec<_>>()));
    Ok(out)
}

/// Slope window on floor-subtracted distances plus resolution of the
/// largest-step distance against the floor.
fn rate_verdicts(cfg: &ExperimentConfig, points: &[LadderPoint], invalid: bool) -> Vec<Verdict> {
    let tol = &cfg.tolerances;
    if points.iter().all(|p| p.signal <= p.floor) {
        return vec![Verdict::with_status("slope", Status::Degenerate)
            .note("every distance is within the noise floor; slope test skipped")];
    }
    let corrected: Vec<(f64, f64)> = points.iter().map(|p| (p.eta_n, p.signal - p.floor)).collect();
    let raw: Vec<(f64, f64)> = points.iter().map(|p| (p.eta_n, p.signal)).collect();
    let raw_fit = rate_fit(&raw).ok();
    let mut slope = match rate_fit(&corrected) {
        Ok(fit) => {
            let pass = fit.slope >= tol.slope_min && fit.slope <= tol.slope_max;
            Verdict::new("slope", pass)
                .metric("slope", fit.slope)
                .metric("intercept", fit.intercept)
                .metric("r2", fit.r2)
        }
        Err(e) => Verdict::new("slope", false).note(format!("floor-subtracted fit failed: {e}")),
    };
    slope = slope
        .metric("window", [tol.slope_min, tol.slope_max])
        .metric("raw_slope", raw_fit.as_ref().map(|f| f.slope))
        .metric("signal", points.iter().map(|p| p.signal).collect::<Vec<_>>())
        .metric("noise_floor", points.iter().map(|p| p.floor).collect::<Vec<_>>());
    let largest = points
        .iter()
        .max_by(|a, b| a.eta_n.total_cmp(&b.eta_n))
        .expect("non-empty ladder");
    let ratio = largest.signal / largest.floor.max(f64::MIN_POSITIVE);
    let mut resolution = Verdict::new("floor_resolution", ratio >= tol.floor_multiple)
        .metric("signal_to_floor", ratio)
        .metric("required", tol.floor_multiple);
    if invalid {
        slope.status = Status::Invalid;
        resolution.status = Status::Invalid;
    }
    vec![slope, resolution]
}

fn batch_monotone_verdict(points: &[(usize, LadderPoint)], invalid: bool) -> Verdict {
    let mut sorted: Vec<&(usize, LadderPoint)> = points.iter().collect();
    sorted.sort_by_key(|(b, _)| *b);
    let ok = sorted
        .windows(2)
        .all(|w| w[1].1.signal <= w[0].1.signal + w[0].1.floor.max(w[1].1.floor));
    let mut v = Verdict::new("batch_monotone", ok)
        .metric("batch", sorted.iter().map(|(b, _)| *b).collect::<Vec<_>>())
        .metric("signal", sorted.iter().map(|(_, p)| p.signal).collect::<Vec<_>>())
        .metric("noise_floor", sorted.iter().map(|(_, p)| p.floor).collect::<Vec<_>>());
    if invalid {
        v.status = Status::Invalid;
    }
    v
}

/// Histogram TV on the phase space (`d = 1`) or on each `(m_i, x_i)` plane
/// (`d = 2`, maximum over planes), with a box fitted to the reference cloud.
pub(crate) fn tv_between(cfg: &ExperimentConfig, reference: &Ensemble, other: &Ensemble) -> Result<f64> {
    let d = reference.dim / 2;
    let planes: Vec<Vec<usize>> = if d == 1 {
        vec![vec![0, 1]]
    } else {
        (0..d).map(|i| vec![i, d + i]).collect()
    };
    let mut worst: f64 = 0.0;
    for coords in planes {
        let r = reference.marginal(&coords)?;
        let o = other.marginal(&coords)?;
        let range = RangeBox::around(&r.points, &r.points, cfg.estimator.box_width)?;
        worst = worst.max(tv_histogram(&r.points, &o.points, cfg.estimator.bins, &range)?);
    }
    Ok(worst)
}

/// TV between SGDm and the reference diffusion along the step ladder at the
/// configured batch size, and along the batch ladder at the smallest step.
pub fn run_rate_tv(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let setup = Setup::new(cfg)?;
    let eta_min = cfg.ladder.eta.iter().cloned().fold(f64::INFINITY, f64::min);
    let m = cfg.ensemble_size;
    let mut rows = Vec::new();
    let mut runs = Vec::new();

    let mut measure = |eta: f64, params: &ModelParams, slot: u64| -> Result<LadderPoint> {
        let schedule = cfg.schedule_with_eta(eta)?;
        let n = cfg.final_step(&schedule);
        let time = schedule.cumulative_time(n);
        let eta_n = schedule.eta(n.max(1))?;
        let (ref_sys, substeps) = reference_system(cfg, &schedule, eta_min);
        let sgdm = run_system(cfg, &setup, params, System::Sgdm, &schedule, derive_seed(cfg.seed, tag::SGDM + slot), m, vec![n], 1)?;
        let ref_a = run_system(cfg, &setup, params, ref_sys, &schedule, derive_seed(cfg.seed, tag::REFERENCE + slot), m, vec![n], substeps)?;
        let ref_b = run_system(cfg, &setup, params, ref_sys, &schedule, derive_seed(cfg.seed, tag::FLOOR + slot), m, vec![n], substeps)?;
        let (es, ea, eb) = (final_ensemble(&sgdm), final_ensemble(&ref_a), final_ensemble(&ref_b));
        let signal = tv_between(cfg, &ea, &es)?;
        let floor = tv_between(cfg, &ea, &eb)?;
        rows.push(DistanceRow {
            time,
            eta_n,
            estimator: format!("tv_histogram:N={}", params.batch),
            value: signal,
            noise_floor: floor,
            n_samples: es.len().min(ea.len()),
            seed: cfg.seed,
        });
        runs.push(sgdm);
        runs.push(ref_a);
        runs.push(ref_b);
        Ok(LadderPoint {
            time,
            eta_n,
            signal,
            floor,
        })
    };

    let mut eta_points = Vec::new();
    for (i, &eta) in cfg.ladder.eta.iter().enumerate() {
        eta_points.push(measure(eta, &setup.params, i as u64)?);
    }
    let mut batch_points = Vec::new();
    for (j, &batch) in cfg.ladder.batch.iter().enumerate() {
        let params = ModelParams { batch, ..setup.params };
        batch_points.push((batch, measure(eta_min, &params, 50 + j as u64)?));
    }

    let mut out = ExperimentOutput::new(Experiment::RateTv, distance_table(&rows));
    out.blowups = runs.iter().map(|r| r.blowup_count()).sum();
    let blowups = blowup_verdict(cfg, &runs.iter().collect::<Vec<_>>());
    let invalid = blowups.status == Status::Invalid;
    out.verdicts.push(blowups);

    let mut by_eta: Vec<&LadderPoint> = eta_points.iter().collect();
    by_eta.sort_by(|a, b| b.eta_n.total_cmp(&a.eta_n));
    let pairwise = by_eta
        .windows(2)
        .all(|w| w[1].signal <= w[0].signal + w[0].floor.max(w[1].floor));
    let mut v = Verdict::new("eta_decrease", pairwise)
        .metric("eta_n", by_eta.iter().map(|p| p.eta_n).collect::<Vec<_>>())
        .metric("tv", by_eta.iter().map(|p| p.signal).collect::<Vec<_>>())
        .metric("noise_floor", by_eta.iter().map(|p| p.floor).collect::<Vec<_>>());
    if let Some(last) = by_eta.last() {
        v = v.metric("smallest_step_excess_over_floor", last.signal - last.floor);
    }
    if eta_points.iter().all(|p| p.signal <= p.floor) {
        v.status = Status::Degenerate;
        v = v.note("every TV estimate is within the noise floor");
    }
    if invalid {
        v.status = Status::Invalid;
    }
    out.verdicts.push(v);

    if batch_points.len() >= 2 {
        let mut sorted: Vec<&(usize, LadderPoint)> = batch_points.iter().collect();
        sorted.sort_by_key(|(b, _)| *b);
        let (first, last) = (&sorted[0].1, &sorted[sorted.len() - 1].1);
        let ok = last.signal <= first.signal + first.floor.max(last.floor);
        let mut v = Verdict::new("batch_decrease", ok)
            .metric("batch", sorted.iter().map(|(b, _)| *b).collect::<Vec<_>>())
            .metric("tv", sorted.iter().map(|(_, p)| p.signal).collect::<Vec<_>>())
            .metric("noise_floor", sorted.iter().map(|(_, p)| p.floor).collect::<Vec<_>>())
            .metric("eta", eta_min);
        if invalid {
            v.status = Status::Invalid;
        }
        out.verdicts.push(v);
    }
    out.limitations.push(
        "the polynomial dimension factor of the TV bound is not verified; only the dependence on the step size and batch size at fixed small d is tested".into(),
    );
    out.limitations.push(format!(
        "histogram estimator with {} bins per axis and a box of mean +- {} std; binning bias is not removed",
        cfg.estimator.bins, cfg.estimator.box_width
    ));
    Ok(out)
}

/// W1 between the one-step SGDm law and the one-step diffusion law from a
/// fixed start, fitted against the step size.
pub fn run_one_step_check(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    let setup = Setup::new(cfg)?;
    let eta_min = cfg.ladder.eta.iter().cloned().fold(f64::INFINITY, f64::min);
    let m = cfg.ensemble_size;
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    let mut points = Vec::new();
    for (i, &eta) in cfg.ladder.eta.iter().enumerate() {
        let schedule = cfg.schedule_with_eta(eta)?;
        let (ref_sys, substeps) = reference_system(cfg, &schedule, eta_min);
        let slot = i as u64;
        let p = &setup.params;
        let sgdm = run_system(cfg, &setup, p, System::Sgdm, &schedule, derive_seed(cfg.seed, tag::SGDM + slot), m, vec![1], 1)?;
        let ref_a = run_system(cfg, &setup, p, ref_sys, &schedule, derive_seed(cfg.seed, tag::REFERENCE + slot), m, vec![1], substeps)?;
        let ref_b = run_system(cfg, &setup, p, ref_sys, &schedule, derive_seed(cfg.seed, tag::FLOOR + slot), m, vec![1], substeps)?;
        let (es, ea, eb) = (final_ensemble(&sgdm), final_ensemble(&ref_a), final_ensemble(&ref_b));
        let (d, est) = w1_against(cfg, &ea, &[&es, &eb])?;
        rows.push(DistanceRow {
            time: eta,
            eta_n: eta,
            estimator: est.to_string(),
            value: d[0],
            noise_floor: d[1],
            n_samples: es.len().min(ea.len()),
            seed: cfg.seed,
        });
        points.push(LadderPoint {
            time: eta,
            eta_n: eta,
            signal: d[0],
            floor: d[1],
        });
        runs.extend([sgdm, ref_a, ref_b]);
    }
    let mut out = ExperimentOutput::new(Experiment::OneStepCheck, distance_table(&rows));
    out.blowups = runs.iter().map(|r| r.blowup_count()).sum();
    let blowups = blowup_verdict(cfg, &runs.iter().collect::<Vec<_>>());
    let invalid = blowups.status == Status::Invalid;
    out.verdicts.push(blowups);
    let mut verdicts = rate_verdicts(cfg, &points, invalid);
    // the one-step order is assessed by the slope alone
    verdicts.retain(|v| v.name == "slope");
    out.verdicts.extend(verdicts);
    out.limitations.push(SLICED_NOTE.into());
    Ok(out)
}
