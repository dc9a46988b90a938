//! The three stochastic systems on phase space `(m, x)`:
//!
//! * SGDm, the discrete momentum recursion with mini-batch gradients and
//!   injected Gaussian noise `β √η ζ`;
//! * the intermediate system, which freezes drift at the left grid point and
//!   is driven by Brownian increments, so its grid values equal SGDm
//!   pathwise when `ζ = ΔB / √η`;
//! * the underdamped Langevin diffusion, via Euler–Maruyama substeps or, for
//!   the quadratic well, its exact Gaussian transition.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{all_finite, expm, inf_norm, norm_sq, psd_factor};
use crate::metrics::Ensemble;
use crate::noise::{NoiseMode, NoiseStream, StepDraws};
use crate::objective::{GradNoiseModel, Objective, ObjectiveKind};
use crate::schedule::StepSchedule;

/// Trajectories whose phase-space norm exceeds this are frozen and flagged.
pub const BLOWUP_NORM: f64 = 1e12;

/// A phase-space point: momentum `m` and position `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub m: Vec<f64>,
    pub x: Vec<f64>,
}

impl State {
    pub fn new(m: Vec<f64>, x: Vec<f64>) -> Result<Self> {
        if m.len() != x.len() || m.is_empty() {
            return Err(Error::Argument(
                "momentum and position need the same positive dimension".into(),
            ));
        }
        Ok(Self { m, x })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: vec![0.0; dim],
            x: vec![0.0; dim],
        }
    }

    /// `(1, ..., 1; 1, ..., 1)`.
    pub fn ones(dim: usize) -> Self {
        Self {
            m: vec![1.0; dim],
            x: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.m.len()
    }

    pub fn is_finite(&self) -> bool {
        all_finite(&self.m) && all_finite(&self.x)
    }

    pub fn norm(&self) -> f64 {
        (norm_sq(&self.m) + norm_sq(&self.x)).sqrt()
    }

    /// `(m_1..m_d, x_1..x_d)`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.dim());
        v.extend_from_slice(&self.m);
        v.extend_from_slice(&self.x);
        v
    }

    pub fn from_slice(z: &[f64]) -> Self {
        let d = z.len() / 2;
        Self {
            m: z[..d].to_vec(),
            x: z[d..].to_vec(),
        }
    }

    pub fn distance(&self, other: &State) -> f64 {
        let dm: f64 = self.m.iter().zip(&other.m).map(|(a, b)| (a - b) * (a - b)).sum();
        let dx: f64 = self.x.iter().zip(&other.x).map(|(a, b)| (a - b) * (a - b)).sum();
        (dm + dx).sqrt()
    }

    fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::Domain("non-finite state".into()))
        }
    }
}

/// Friction `γ`, temperature `β`, mini-batch size `N` and dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub gamma: f64,
    pub beta: f64,
    #[serde(rename = "batch")]
    pub batch: usize,
    #[serde(default)]
    pub dim: usize,
}

impl ModelParams {
    pub fn new(gamma: f64, beta: f64, batch: usize, dim: usize) -> Result<Self> {
        let p = Self {
            gamma,
            beta,
            batch,
            dim,
        };
        p.validate()?;
        Ok(p)
    }

    /// `γ ≥ 0` and `β ≥ 0`, so that the degenerate free-transport and
    /// noiseless cases stay constructible.
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config("friction must be finite and >= 0".into()));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::Config("temperature must be finite and >= 0".into()));
        }
        if self.batch == 0 {
            return Err(Error::Config("mini-batch size must be at least 1".into()));
        }
        if self.dim == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        Ok(())
    }

    /// Rejects `γ ≤ √2 (2L + a)/√a`.
    pub fn require_contraction_regime(&self, obj: &Objective) -> Result<()> {
        let thr = obj.constants.friction_threshold();
        if self.gamma > thr {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "friction {} must exceed sqrt(2)(2L+a)/sqrt(a) = {thr:.6}",
                self.gamma
            )))
        }
    }
}

fn check_inputs(s: &State, p: &ModelParams, obj: &Objective) -> Result<()> {
    if s.dim() != p.dim || s.dim() != obj.dim {
        return Err(Error::Argument(format!(
            "state dimension {} does not match model {} / objective {}",
            s.dim(),
            p.dim,
            obj.dim
        )));
    }
    s.ensure_finite()
}

fn check_draws(draws: &StepDraws, p: &ModelParams) -> Result<()> {
    if draws.batch.len() != p.batch {
        return Err(Error::Argument(format!(
            "expected {} mini-batch draws, got {}",
            p.batch,
            draws.batch.len()
        )));
    }
    if draws.zeta.len() != p.dim || draws.brownian.len() != p.dim {
        return Err(Error::Argument("increment dimension mismatch".into()));
    }
    Ok(())
}

/// Left-point update shared by SGDm and the intermediate system:
/// `m' = m − γη m − η g(x) + β inc`, `x' = x + η m`.
#[inline]
fn frozen_drift_update(
    s: &mut State,
    eta: f64,
    p: &ModelParams,
    obj: &Objective,
    batch: &[Vec<f64>],
    increment: &[f64],
    grad: &mut [f64],
) {
    obj.minibatch_grad_into(&s.x, batch, grad);
    let ge = p.gamma * eta;
    for i in 0..s.m.len() {
        let m = s.m[i];
        s.m[i] = m - ge * m - eta * grad[i] + p.beta * increment[i];
        s.x[i] += eta * m;
    }
}

#[inline]
fn sgdm_advance(
    s: &mut State,
    eta: f64,
    p: &ModelParams,
    obj: &Objective,
    draws: &StepDraws,
    scaled: &mut [f64],
    grad: &mut [f64],
) {
    let r = eta.sqrt();
    for (o, z) in scaled.iter_mut().zip(&draws.zeta) {
        *o = r * z;
    }
    frozen_drift_update(s, eta, p, obj, &draws.batch, scaled, grad);
}

/// One SGDm step from `s` with step size `eta`, using `draws.batch` and
/// `draws.zeta`.
pub fn sgdm_step(
    s: &State,
    eta: f64,
    p: &ModelParams,
    obj: &Objective,
    draws: &StepDraws,
) -> Result<State> {
    check_step(eta)?;
    check_inputs(s, p, obj)?;
    check_draws(draws, p)?;
    let mut out = s.clone();
    let mut scaled = vec![0.0; p.dim];
    let mut grad = vec![0.0; p.dim];
    sgdm_advance(&mut out, eta, p, obj, draws, &mut scaled, &mut grad);
    out.ensure_finite()?;
    Ok(out)
}

/// One step of the intermediate system over `[t_k, t_k + eta)`, using
/// `draws.batch` and the Brownian increment `draws.brownian`.
pub fn intermediate_step(
    s: &State,
    eta: f64,
    p: &ModelParams,
    obj: &Objective,
    draws: &StepDraws,
) -> Result<State> {
    check_step(eta)?;
    check_inputs(s, p, obj)?;
    check_draws(draws, p)?;
    let mut out = s.clone();
    let mut grad = vec![0.0; p.dim];
    frozen_drift_update(&mut out, eta, p, obj, &draws.batch, &draws.brownian, &mut grad);
    out.ensure_finite()?;
    Ok(out)
}

#[inline]
fn em_advance(s: &mut State, delta: f64, p: &ModelParams, obj: &Objective, db: &[f64], grad: &mut [f64]) {
    obj.grad_into(&s.x, grad);
    for i in 0..s.m.len() {
        let m = s.m[i];
        s.m[i] = m - delta * (p.gamma * m + grad[i]) + p.beta * db[i];
        s.x[i] += delta * m;
    }
}

/// Euler–Maruyama substep of the underdamped Langevin diffusion, with the
/// exact gradient evaluated at the current position.
pub fn langevin_em_step(
    s: &State,
    delta: f64,
    p: &ModelParams,
    obj: &Objective,
    db: &[f64],
) -> Result<State> {
    check_step(delta)?;
    check_inputs(s, p, obj)?;
    if db.len() != p.dim {
        return Err(Error::Argument("increment dimension mismatch".into()));
    }
    let mut out = s.clone();
    let mut grad = vec![0.0; p.dim];
    em_advance(&mut out, delta, p, obj, db, &mut grad);
    out.ensure_finite()?;
    Ok(out)
}

fn check_step(eta: f64) -> Result<()> {
    if eta > 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(Error::Argument(format!("step size must be positive, got {eta}")))
    }
}

/// Exact transition of the linear diffusion for `f(x) = s|x|²/2` over a
/// time `dt`: `z' = F z + S g` with `g ~ N(0, I_{2d})`, `F = exp(dt D)` and
/// `S Sᵀ` the transition covariance.
#[derive(Debug, Clone)]
pub struct OuTransition {
    pub dt: f64,
    mean_map: DMatrix<f64>,
    cov: DMatrix<f64>,
    cov_factor: DMatrix<f64>,
}

impl OuTransition {
    pub fn new(dt: f64, p: &ModelParams, scale: f64) -> Result<Self> {
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::Argument("transition time must be >= 0".into()));
        }
        let d = p.dim;
        let n = 2 * d;
        let mut drift = DMatrix::<f64>::zeros(n, n);
        let mut q = DMatrix::<f64>::zeros(n, n);
        for i in 0..d {
            drift[(i, i)] = -p.gamma;
            drift[(i, d + i)] = -scale;
            drift[(d + i, i)] = 1.0;
            q[(i, i)] = p.beta * p.beta;
        }
        // Van Loan block exponential over a short interval h, then exact
        // doubling (F, C) -> (F², F C Fᵀ + C) up to dt.
        let mut halvings = 0;
        let norm = inf_norm(&drift).max(1.0);
        while norm * dt / 2f64.powi(halvings) > 0.5 {
            halvings += 1;
        }
        let h = dt / 2f64.powi(halvings);
        let mut block = DMatrix::<f64>::zeros(2 * n, 2 * n);
        block.view_mut((0, 0), (n, n)).copy_from(&(&drift * h));
        block.view_mut((0, n), (n, n)).copy_from(&(&q * h));
        block
            .view_mut((n, n), (n, n))
            .copy_from(&(-drift.transpose() * h));
        let e = expm(&block);
        let mut f = e.view((0, 0), (n, n)).into_owned();
        let g = e.view((0, n), (n, n)).into_owned();
        let mut c = &g * f.transpose();
        for _ in 0..halvings {
            c = &f * &c * f.transpose() + &c;
            f = &f * &f;
        }
        let c = (&c + c.transpose()) * 0.5;
        let factor = psd_factor(&c);
        Ok(Self {
            dt,
            mean_map: f,
            cov: c,
            cov_factor: factor,
        })
    }

    pub fn mean_map(&self) -> &DMatrix<f64> {
        &self.mean_map
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Applies the transition to `s` using `2d` standard normals.
    pub fn apply(&self, s: &State, gauss: &[f64]) -> Result<State> {
        let n = 2 * s.dim();
        if gauss.len() != n || self.mean_map.nrows() != n {
            return Err(Error::Argument("gaussian draw must have length 2d".into()));
        }
        let z = DVector::from_vec(s.to_vec());
        let g = DVector::from_column_slice(gauss);
        let out = &self.mean_map * z + &self.cov_factor * g;
        Ok(State::from_slice(out.as_slice()))
    }
}

fn quadratic_scale(obj: &Objective) -> Result<f64> {
    match obj.kind {
        ObjectiveKind::QuadraticWell { scale } => Ok(scale),
        _ => Err(Error::UnsupportedObjective(
            "the exact Gaussian transition needs a quadratic well".into(),
        )),
    }
}

/// Exact diffusion transition over `dt` for the quadratic well.
pub fn exact_ou_step(
    s: &State,
    dt: f64,
    p: &ModelParams,
    obj: &Objective,
    gauss: &[f64],
) -> Result<State> {
    let scale = quadratic_scale(obj)?;
    check_inputs(s, p, obj)?;
    OuTransition::new(dt, p, scale)?.apply(s, gauss)
}

/// Largest real part among the eigenvalues of the per-coordinate drift
/// matrix `[[−γ, −s], [1, 0]]`.
pub fn drift_eigenvalue_max(gamma: f64, scale: f64) -> f64 {
    let disc = gamma * gamma - 4.0 * scale;
    if disc >= 0.0 {
        (-gamma + disc.sqrt()) / 2.0
    } else {
        -gamma / 2.0
    }
}

/// Phase-space distance between two synchronously coupled chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionTrace {
    pub times: Vec<f64>,
    pub distances: Vec<f64>,
}

/// Evolves two Euler–Maruyama Langevin chains with identical Brownian
/// increments and records their distance every `record_every` substeps.
#[allow(clippy::too_many_arguments)]
pub fn coupled_contraction_pair(
    s1: &State,
    s2: &State,
    horizon: f64,
    delta: f64,
    p: &ModelParams,
    obj: &Objective,
    stream: &mut NoiseStream,
    record_every: usize,
) -> Result<ContractionTrace> {
    check_step(delta)?;
    check_inputs(s1, p, obj)?;
    check_inputs(s2, p, obj)?;
    let steps = (horizon / delta).round() as usize;
    let every = record_every.max(1);
    let mut a = s1.clone();
    let mut b = s2.clone();
    let mut grad = vec![0.0; p.dim];
    let mut db = vec![0.0; p.dim];
    let mut trace = ContractionTrace {
        times: vec![0.0],
        distances: vec![a.distance(&b)],
    };
    for k in 1..=steps {
        stream.fill_brownian(delta, &mut db);
        em_advance(&mut a, delta, p, obj, &db, &mut grad);
        em_advance(&mut b, delta, p, obj, &db, &mut grad);
        if !(a.is_finite() && b.is_finite()) || a.norm() > BLOWUP_NORM || b.norm() > BLOWUP_NORM {
            return Err(Error::Blowup { step: k });
        }
        if k % every == 0 || k == steps {
            trace.times.push(k as f64 * delta);
            trace.distances.push(a.distance(&b));
        }
    }
    Ok(trace)
}

/// Which system an ensemble evolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum System {
    Sgdm,
    Intermediate,
    LangevinEm,
    ExactOu,
}

/// Inputs of [`evolve_ensemble`].
#[derive(Debug, Clone)]
pub struct EnsembleSpec<'a> {
    pub system: System,
    pub schedule: &'a StepSchedule,
    pub params: &'a ModelParams,
    pub objective: &'a Objective,
    pub noise: &'a GradNoiseModel,
    pub seed: u64,
    pub mode: NoiseMode,
    pub count: usize,
    /// Common initial point of every trajectory.
    pub init: State,
    /// Grid indices `n` (times `t_n`) at which snapshots are taken.
    pub record_steps: Vec<usize>,
    /// Euler–Maruyama substeps per grid step (LangevinEm only).
    pub substeps: usize,
}

/// States of all trajectories at one grid time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub states: Vec<State>,
    /// False for trajectories frozen by a blowup at or before this step.
    pub valid: Vec<bool>,
}

impl Snapshot {
    /// Phase-space ensemble of the valid trajectories.
    pub fn ensemble(&self) -> Ensemble {
        let points: Vec<Vec<f64>> = self
            .states
            .iter()
            .zip(&self.valid)
            .filter(|(_, v)| **v)
            .map(|(s, _)| s.to_vec())
            .collect();
        let dim = self.states.first().map(|s| 2 * s.dim()).unwrap_or(0);
        Ensemble {
            dim,
            points,
            time_label: self.time,
            excluded: self.valid.iter().filter(|v| !**v).count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    pub snapshots: Vec<Snapshot>,
    /// First step at which each trajectory blew up, if it did.
    pub blowups: Vec<Option<usize>>,
}

impl EnsembleRun {
    pub fn blowup_count(&self) -> usize {
        self.blowups.iter().filter(|b| b.is_some()).count()
    }

    pub fn blowup_fraction(&self) -> f64 {
        if self.blowups.is_empty() {
            0.0
        } else {
            self.blowup_count() as f64 / self.blowups.len() as f64
        }
    }

    pub fn last(&self) -> Option<&Snapshot> {
        self.snapshots.last()
    }
}

struct TrajectoryOutput {
    states: Vec<State>,
    blowup: Option<usize>,
}

fn blown(s: &State) -> bool {
    !s.is_finite() || s.norm() > BLOWUP_NORM
}

/// Evolves `count` independent trajectories, trajectory `i` driven by the
/// noise stream `(seed, i)`, and snapshots them at `record_steps`.
///
/// SGDm and Intermediate ensembles built from the same seed in
/// `BrownianDerived` mode are pathwise identical up to rounding.
pub fn evolve_ensemble(spec: &EnsembleSpec<'_>) -> Result<EnsembleRun> {
    spec.params.validate()?;
    spec.schedule.validate()?;
    spec.noise.validate()?;
    check_inputs(&spec.init, spec.params, spec.objective)?;
    let mut record = spec.record_steps.clone();
    record.sort_unstable();
    record.dedup();
    let last = record.last().copied().unwrap_or(0);
    let times = spec.schedule.times(last);

    // For the exact system, one transition per recording interval.
    let transitions: Vec<OuTransition> = if spec.system == System::ExactOu {
        let scale = quadratic_scale(spec.objective)?;
        let mut prev = 0.0;
        record
            .iter()
            .map(|&n| {
                let t = OuTransition::new(times[n] - prev, spec.params, scale);
                prev = times[n];
                t
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    if spec.system == System::LangevinEm && spec.substeps == 0 {
        return Err(Error::Config("LangevinEm needs at least one substep".into()));
    }

    let run_one = |i: usize| -> TrajectoryOutput {
        let mut stream = NoiseStream::new(spec.seed, i as u64, spec.mode);
        let p = spec.params;
        let d = p.dim;
        let mut s = spec.init.clone();
        let mut states = Vec::with_capacity(record.len());
        let mut blowup = None;
        match spec.system {
            System::ExactOu => {
                let mut g = vec![0.0; 2 * d];
                for (j, tr) in transitions.iter().enumerate() {
                    if blowup.is_none() {
                        stream.fill_standard_normals(&mut g);
                        let next = tr.apply(&s, &g).expect("dimensions checked");
                        if blown(&next) {
                            blowup = Some(record[j]);
                        } else {
                            s = next;
                        }
                    }
                    states.push(s.clone());
                }
            }
            system => {
                let mut draws = StepDraws::zeros(d, p.batch);
                let mut db = vec![0.0; d];
                let mut scaled = vec![0.0; d];
                let mut grad = vec![0.0; d];
                let mut next_record = 0;
                if record.first() == Some(&0) {
                    states.push(s.clone());
                    next_record = 1;
                }
                for k in 1..=last {
                    if blowup.is_none() {
                        let eta = spec.schedule.eta_at(k);
                        match system {
                            System::Sgdm => {
                                stream.fill_step(spec.noise, eta, &mut draws);
                                sgdm_advance(&mut s, eta, p, spec.objective, &draws, &mut scaled, &mut grad);
                            }
                            System::Intermediate => {
                                stream.fill_step(spec.noise, eta, &mut draws);
                                frozen_drift_update(
                                    &mut s,
                                    eta,
                                    p,
                                    spec.objective,
                                    &draws.batch,
                                    &draws.brownian,
                                    &mut grad,
                                );
                            }
                            System::LangevinEm => {
                                let delta = eta / spec.substeps as f64;
                                for _ in 0..spec.substeps {
                                    stream.fill_brownian(delta, &mut db);
                                    em_advance(&mut s, delta, p, spec.objective, &db, &mut grad);
                                }
                            }
                            System::ExactOu => unreachable!(),
                        }
                        if blown(&s) {
                            blowup = Some(k);
                        }
                    }
                    if next_record < record.len() && record[next_record] == k {
                        states.push(s.clone());
                        next_record += 1;
                    }
                }
            }
        }
        TrajectoryOutput { states, blowup }
    };

    #[cfg(feature = "parallel")]
    let outputs: Vec<TrajectoryOutput> = {
        use rayon::prelude::*;
        (0..spec.count).into_par_iter().map(run_one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let outputs: Vec<TrajectoryOutput> = (0..spec.count).map(run_one).collect();

    let blowups: Vec<Option<usize>> = outputs.iter().map(|o| o.blowup).collect();
    let mut snapshots: Vec<Snapshot> = record
        .iter()
        .map(|&n| Snapshot {
            step: n,
            time: times[n],
            states: Vec::with_capacity(spec.count),
            valid: Vec::with_capacity(spec.count),
        })
        .collect();
    for out in outputs {
        for (j, st) in out.states.into_iter().enumerate() {
            let ok = out.blowup.is_none_or(|b| b > snapshots[j].step);
            snapshots[j].states.push(st);
            snapshots[j].valid.push(ok);
        }
    }
    Ok(EnsembleRun { snapshots, blowups })
}

/// Single trajectory of SGDm or the intermediate system, returning every
/// grid state `0..=steps`; a blowup is an error carrying the step index.
#[allow(clippy::too_many_arguments)]
pub fn run_path(
    system: System,
    init: &State,
    schedule: &StepSchedule,
    p: &ModelParams,
    obj: &Objective,
    noise: &GradNoiseModel,
    stream: &mut NoiseStream,
    steps: usize,
) -> Result<Vec<State>> {
    check_inputs(init, p, obj)?;
    let mut s = init.clone();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(s.clone());
    let mut draws = StepDraws::zeros(p.dim, p.batch);
    for k in 1..=steps {
        let eta = schedule.eta_at(k);
        stream.fill_step(noise, eta, &mut draws);
        s = match system {
            System::Sgdm => sgdm_step(&s, eta, p, obj, &draws),
            System::Intermediate => intermediate_step(&s, eta, p, obj, &draws),
            _ => {
                return Err(Error::Argument(
                    "run_path drives SGDm or the intermediate system".into(),
                ))
            }
        }
        .map_err(|e| match e {
            Error::Domain(_) => Error::Blowup { step: k },
            other => other,
        })?;
        if s.norm() > BLOWUP_NORM {
            return Err(Error::Blowup { step: k });
        }
        out.push(s.clone());
    }
    Ok(out)
}

/// Writes snapshot rows `time,trajectory_id,m_1..m_d,x_1..x_d`.
pub fn write_snapshots_csv<W: std::io::Write>(run: &EnsembleRun, mut w: W) -> Result<()> {
    let d = run
        .snapshots
        .first()
        .and_then(|s| s.states.first())
        .map(|s| s.dim())
        .unwrap_or(0);
    let mut header = vec!["time".to_string(), "trajectory_id".to_string()];
    header.extend((1..=d).map(|i| format!("m_{i}")));
    header.extend((1..=d).map(|i| format!("x_{i}")));
    writeln!(w, "{}", header.join(","))?;
    for snap in &run.snapshots {
        for (id, s) in snap.states.iter().enumerate() {
            let mut row = vec![format!("{}", snap.time), id.to_string()];
            row.extend(s.m.iter().chain(&s.x).map(|v| format!("{v}")));
            writeln!(w, "{}", row.join(","))?;
        }
    }
    Ok(())
}
