//! Browser bindings: a synchronous-coupling contraction trace, an SGDm
//! versus exact-diffusion law comparison, and a Lyapunov drift heatmap.
//!
//! Every export returns JSON text; the `*_json` functions hold the logic
//! and are what the native tests exercise.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use sgdm_lab::dynamics::drift_eigenvalue_max;
use sgdm_lab::lyapunov::drift_margin;
use sgdm_lab::metrics::{linear_fit, w1_sliced_against, RangeBox};
use sgdm_lab::noise::derive_seed;
use sgdm_lab::{
    coupled_contraction_pair, evolve_ensemble, tv_histogram, EnsembleSpec, GradNoiseModel,
    LyapunovParams, ModelParams, NoiseMode, NoiseStream, Objective, Result, State, StepSchedule,
    System,
};

const GAUSS: GradNoiseModel = GradNoiseModel::AdditiveGaussian { scale: 1.0 };
const HIST_BINS: usize = 40;

fn objective(amplitude: f64) -> Result<Objective> {
    if amplitude == 0.0 {
        Objective::quadratic_well(1, 1.0)
    } else {
        Objective::cosine_perturbed(1, 1.0, amplitude)
    }
}

/// Distance between two Langevin chains started at `(±1, ±1)` and driven by
/// the same Brownian path, with the fitted exponential rate.
pub fn contraction_trace_json(gamma: f64, amplitude: f64, horizon: f64, seed: u64) -> Result<Value> {
    let obj = objective(amplitude)?;
    let p = ModelParams::new(gamma, 1.0, 1, 1)?;
    let mut stream = NoiseStream::new(seed, 0, NoiseMode::BrownianDerived);
    let a = State::ones(1);
    let b = State::new(vec![-1.0], vec![-1.0])?;
    let trace = coupled_contraction_pair(&a, &b, horizon, 1e-3, &p, &obj, &mut stream, 20)?;
    let (ts, ls): (Vec<f64>, Vec<f64>) = trace
        .times
        .iter()
        .zip(&trace.distances)
        .filter(|(t, d)| **t >= 0.1 * horizon && **d > 0.0)
        .map(|(t, d)| (*t, d.ln()))
        .unzip();
    let theta = linear_fit(&ts, &ls).map(|(s, _, _)| -s).ok();
    let oracle = (amplitude == 0.0).then(|| -drift_eigenvalue_max(gamma, 1.0));
    Ok(json!({
        "times": trace.times,
        "distances": trace.distances,
        "theta_hat": theta,
        "oracle": oracle,
    }))
}

fn histogram(values: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut h = vec![0.0; HIST_BINS];
    let w = (hi - lo) / HIST_BINS as f64;
    for v in values {
        let i = ((v - lo) / w).floor();
        if i >= 0.0 && (i as usize) < HIST_BINS {
            h[i as usize] += 1.0;
        }
    }
    let scale = 1.0 / (values.len().max(1) as f64 * w);
    h.iter_mut().for_each(|c| *c *= scale);
    h
}

/// SGDm on `f(x) = x²/2` against the exact diffusion at `t = 5`: sliced W1,
/// histogram TV, the same-law noise floors and position histograms.
pub fn compare_laws_json(eta: f64, batch: usize, gamma: f64, count: usize, seed: u64) -> Result<Value> {
    let obj = Objective::quadratic_well(1, 1.0)?;
    let p = ModelParams::new(gamma, 1.0, batch, 1)?;
    let sched = StepSchedule::constant(eta)?;
    let n = sched.steps_to_reach(5.0);
    let run = |system: System, tag: u64| -> Result<Vec<Vec<f64>>> {
        let spec = EnsembleSpec {
            system,
            schedule: &sched,
            params: &p,
            objective: &obj,
            noise: &GAUSS,
            seed: derive_seed(seed, tag),
            mode: NoiseMode::BrownianDerived,
            count,
            init: State::ones(1),
            record_steps: vec![n],
            substeps: 1,
        };
        Ok(evolve_ensemble(&spec)?.last().map(|s| s.ensemble().points).unwrap_or_default())
    };
    let sgdm = run(System::Sgdm, 1)?;
    let exact = run(System::ExactOu, 2)?;
    let exact_b = run(System::ExactOu, 3)?;
    let w1 = w1_sliced_against(&exact, &[&sgdm, &exact_b], 64, seed)?;
    let range = RangeBox::around(&exact, &exact_b, 5.0)?;
    let tv = tv_histogram(&sgdm, &exact, 24, &range)?;
    let tv_floor = tv_histogram(&exact_b, &exact, 24, &range)?;
    let (lo, hi) = (range.lo[1], range.hi[1]);
    let xs = |pts: &[Vec<f64>]| pts.iter().map(|z| z[1]).collect::<Vec<_>>();
    Ok(json!({
        "time": sched.cumulative_time(n),
        "w1": w1[0],
        "w1_floor": w1[1],
        "tv": tv,
        "tv_floor": tv_floor,
        "blowups": count - sgdm.len(),
        "range": [lo, hi],
        "hist_sgdm": histogram(&xs(&sgdm), lo, hi),
        "hist_exact": histogram(&xs(&exact), lo, hi),
    }))
}

/// Drift margins `−λγV + c − 𝒜V` on a `cells × cells` grid of the `(x, m)`
/// square of half-width `radius`, row-major with `m` varying slowest.
pub fn drift_heatmap_json(gamma: f64, beta: f64, amplitude: f64, radius: f64, cells: usize) -> Result<Value> {
    let obj = objective(amplitude)?;
    let p = ModelParams::new(gamma, beta, 1, 1)?;
    let lp = LyapunovParams::default_for(&p, &obj);
    let cells = cells.clamp(2, 400);
    let coord = |i: usize| -radius + 2.0 * radius * i as f64 / (cells - 1) as f64;
    let mut margins = Vec::with_capacity(cells * cells);
    for i in 0..cells {
        for j in 0..cells {
            let s = State::new(vec![coord(i)], vec![coord(j)])?;
            margins.push(drift_margin(&p, &lp, &obj, &s));
        }
    }
    let worst = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(json!({
        "cells": cells,
        "radius": radius,
        "lambda": lp.lambda,
        "margins": margins,
        "worst_margin": worst,
    }))
}

fn to_js(v: Result<Value>) -> std::result::Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn contraction_trace(gamma: f64, amplitude: f64, horizon: f64, seed: u32) -> std::result::Result<String, JsError> {
    to_js(contraction_trace_json(gamma, amplitude, horizon, seed.into()))
}

#[wasm_bindgen]
pub fn compare_laws(eta: f64, batch: u32, gamma: f64, count: u32, seed: u32) -> std::result::Result<String, JsError> {
    to_js(compare_laws_json(eta, batch as usize, gamma, count as usize, seed.into()))
}

#[wasm_bindgen]
pub fn drift_heatmap(gamma: f64, beta: f64, amplitude: f64, radius: f64, cells: u32) -> std::result::Result<String, JsError> {
    to_js(drift_heatmap_json(gamma, beta, amplitude, radius, cells as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_trace_matches_oracle() {
        let v = contraction_trace_json(5.0, 0.0, 10.0, 1).unwrap();
        let theta = v["theta_hat"].as_f64().unwrap();
        let oracle = v["oracle"].as_f64().unwrap();
        assert!((theta - oracle).abs() / oracle < 0.02);
    }

    #[test]
    fn law_comparison_reports_floors() {
        let v = compare_laws_json(0.1, 1, 5.0, 2000, 3).unwrap();
        assert!(v["w1"].as_f64().unwrap() > v["w1_floor"].as_f64().unwrap());
        let h = v["hist_sgdm"].as_array().unwrap();
        assert_eq!(h.len(), HIST_BINS);
        assert_eq!(v["blowups"], 0);
    }

    #[test]
    fn heatmap_has_no_violations() {
        let v = drift_heatmap_json(5.0, 1.0, 0.1, 10.0, 30).unwrap();
        assert_eq!(v["margins"].as_array().unwrap().len(), 900);
        assert!(v["worst_margin"].as_f64().unwrap() >= -1e-9);
    }

    #[test]
    fn invalid_parameters_are_errors() {
        assert!(compare_laws_json(-0.1, 1, 5.0, 10, 0).is_err());
        assert!(drift_heatmap_json(-1.0, 1.0, 0.0, 1.0, 4).is_err());
    }
}
