//! Empirical distances between sample clouds (1-D and exact W1, sliced W1,
//! histogram TV), ensemble moments, and log-log rate fits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::assignment::{assignment_cost, min_cost_assignment};
use crate::dynamics::{ModelParams, State};
use crate::error::{Error, Result};
use crate::linalg::{all_finite, dot, euclidean, norm_sq};
use crate::lyapunov::{lyapunov_value, LyapunovParams};
use crate::objective::Objective;

/// Largest sample size accepted by [`w1_exact_small`].
pub const EXACT_W1_MAX: usize = 512;

/// Default number of histogram bins per axis.
pub const DEFAULT_BINS: usize = 64;

/// A cloud of phase-space points `(m, x)` at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    pub time_label: f64,
    /// Trajectories dropped because they blew up.
    pub excluded: usize,
}

impl Ensemble {
    /// Keeps the finite points and counts the rest as excluded.
    pub fn new(dim: usize, points: Vec<Vec<f64>>, time_label: f64) -> Result<Self> {
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::Argument("all points must share the dimension".into()));
        }
        let total = points.len();
        let points: Vec<Vec<f64>> = points.into_iter().filter(|p| all_finite(p)).collect();
        let excluded = total - points.len();
        Ok(Self {
            dim,
            points,
            time_label,
            excluded,
        })
    }

    pub fn from_states(states: &[State], time_label: f64) -> Self {
        let dim = states.first().map(|s| 2 * s.dim()).unwrap_or(0);
        Self {
            dim,
            points: states.iter().map(State::to_vec).collect(),
            time_label,
            excluded: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Projection onto the given coordinates.
    pub fn marginal(&self, coords: &[usize]) -> Result<Ensemble> {
        if coords.iter().any(|&c| c >= self.dim) {
            return Err(Error::Argument("marginal coordinate out of range".into()));
        }
        Ok(Ensemble {
            dim: coords.len(),
            points: self
                .points
                .iter()
                .map(|p| coords.iter().map(|&c| p[c]).collect())
                .collect(),
            time_label: self.time_label,
            excluded: self.excluded,
        })
    }

    /// The momentum block `m_1..m_d`.
    pub fn momentum(&self) -> Ensemble {
        let d = self.dim / 2;
        self.marginal(&(0..d).collect::<Vec<_>>()).expect("in range")
    }

    /// The position block `x_1..x_d`.
    pub fn position(&self) -> Ensemble {
        let d = self.dim / 2;
        self.marginal(&(d..2 * d).collect::<Vec<_>>()).expect("in range")
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[c]).collect()
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for p in &self.points {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
        let n = self.points.len().max(1) as f64;
        out.iter_mut().for_each(|o| *o /= n);
        out
    }

    /// Per-coordinate unbiased sample variance.
    pub fn variance(&self) -> Vec<f64> {
        let mu = self.mean();
        let mut out = vec![0.0; self.dim];
        for p in &self.points {
            for i in 0..self.dim {
                out[i] += (p[i] - mu[i]).powi(2);
            }
        }
        let n = (self.points.len().max(2) - 1) as f64;
        out.iter_mut().for_each(|o| *o /= n);
        out
    }
}

fn same_size(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Argument(format!(
            "samples must have equal size, got {a} and {b}"
        )));
    }
    if a == 0 {
        return Err(Error::Argument("samples must be non-empty".into()));
    }
    Ok(())
}

/// Exact empirical W1 between two sorted samples of equal size.
pub fn w1_1d_sorted(a: &[f64], b: &[f64]) -> Result<f64> {
    same_size(a.len(), b.len())?;
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    Ok(s / a.len() as f64)
}

/// Exact empirical W1 in one dimension; sorts copies of the inputs.
pub fn w1_1d(a: &[f64], b: &[f64]) -> Result<f64> {
    same_size(a.len(), b.len())?;
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    w1_1d_sorted(&a, &b)
}

fn check_clouds(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<usize> {
    same_size(a.len(), b.len())?;
    let k = a[0].len();
    if k == 0 || a.iter().chain(b).any(|p| p.len() != k) {
        return Err(Error::Argument("points must share a positive dimension".into()));
    }
    Ok(k)
}

/// Optimal-assignment W1 with Euclidean cost, for `n ≤ 512`.
pub fn w1_exact_small(a: &[Vec<f64>], b: &[Vec<f64>]) -> Result<f64> {
    check_clouds(a, b)?;
    let n = a.len();
    if n > EXACT_W1_MAX {
        return Err(Error::Argument(format!(
            "exact W1 is limited to {EXACT_W1_MAX} points, got {n}; use the sliced estimator"
        )));
    }
    let cost = cost_matrix(a, b);
    let assign = min_cost_assignment(n, &cost);
    Ok(assignment_cost(n, &cost, &assign) / n as f64)
}

pub(crate) fn cost_matrix(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut cost = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            cost[i * n + j] = euclidean(&a[i], &b[j]);
        }
    }
    cost
}

/// Uniform unit directions in `R^k`.
pub fn random_directions(k: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let v: Vec<f64> = (0..k).map(|_| StandardNormal.sample(&mut rng)).collect();
            let n = norm_sq(&v).sqrt();
            if n > 1e-12 {
                break v.into_iter().map(|c| c / n).collect();
            }
        })
        .collect()
}

/// Mean of the 1-D W1 over `n_proj` random projections.
pub fn w1_sliced(a: &[Vec<f64>], b: &[Vec<f64>], n_proj: usize, seed: u64) -> Result<f64> {
    let k = check_clouds(a, b)?;
    if n_proj == 0 {
        return Err(Error::Argument("need at least one projection".into()));
    }
    let dirs = random_directions(k, n_proj, seed);
    let one = |u: &Vec<f64>| -> f64 {
        let mut pa: Vec<f64> = a.iter().map(|p| dot(p, u)).collect();
        let mut pb: Vec<f64> = b.iter().map(|p| dot(p, u)).collect();
        pa.sort_unstable_by(f64::total_cmp);
        pb.sort_unstable_by(f64::total_cmp);
        w1_1d_sorted(&pa, &pb).expect("sizes checked")
    };
    #[cfg(feature = "parallel")]
    let values: Vec<f64> = {
        use rayon::prelude::*;
        dirs.par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let values: Vec<f64> = dirs.iter().map(one).collect();
    Ok(values.iter().sum::<f64>() / n_proj as f64)
}

/// Sliced W1 from each cloud in `others` to `reference`, sharing the
/// directions (so equal to separate [`w1_sliced`] calls with the same seed)
/// and the sorted reference projections.
pub fn w1_sliced_against(
    reference: &[Vec<f64>],
    others: &[&[Vec<f64>]],
    n_proj: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut k = 0;
    for o in others {
        k = check_clouds(reference, o)?;
    }
    if others.is_empty() {
        return Ok(Vec::new());
    }
    if n_proj == 0 {
        return Err(Error::Argument("need at least one projection".into()));
    }
    let dirs = random_directions(k, n_proj, seed);
    let project = |cloud: &[Vec<f64>], u: &[f64]| -> Vec<f64> {
        let mut v: Vec<f64> = cloud.iter().map(|p| dot(p, u)).collect();
        v.sort_unstable_by(f64::total_cmp);
        v
    };
    let one = |u: &Vec<f64>| -> Vec<f64> {
        let r = project(reference, u);
        others
            .iter()
            .map(|o| w1_1d_sorted(&project(o, u), &r).expect("sizes checked"))
            .collect()
    };
    #[cfg(feature = "parallel")]
    let per_dir: Vec<Vec<f64>> = {
        use rayon::prelude::*;
        dirs.par_iter().map(one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let per_dir: Vec<Vec<f64>> = dirs.iter().map(one).collect();
    Ok((0..others.len())
        .map(|j| per_dir.iter().map(|v| v[j]).sum::<f64>() / n_proj as f64)
        .collect())
}

/// Axis-aligned box for histogram binning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl RangeBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let b = Self { lo, hi };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<()> {
        if self.lo.len() != self.hi.len() || self.lo.is_empty() {
            return Err(Error::Argument("box bounds need one entry per axis".into()));
        }
        if self
            .lo
            .iter()
            .zip(&self.hi)
            .any(|(l, h)| !(l.is_finite() && h.is_finite() && h > l))
        {
            return Err(Error::Argument("degenerate range box".into()));
        }
        Ok(())
    }

    /// Pooled mean ± `width` pooled standard deviations per axis.
    pub fn around(a: &[Vec<f64>], b: &[Vec<f64>], width: f64) -> Result<Self> {
        let all: Vec<Vec<f64>> = a.iter().chain(b).cloned().collect();
        let k = all.first().map(|p| p.len()).unwrap_or(0);
        let e = Ensemble::new(k, all, 0.0)?;
        let mu = e.mean();
        let var = e.variance();
        Self::new(
            mu.iter().zip(&var).map(|(m, v)| m - width * v.sqrt()).collect(),
            mu.iter().zip(&var).map(|(m, v)| m + width * v.sqrt()).collect(),
        )
    }

    /// Fraction of `points` inside the box.
    pub fn coverage(&self, points: &[Vec<f64>]) -> f64 {
        if points.is_empty() {
            return 1.0;
        }
        let inside = points
            .iter()
            .filter(|p| {
                p.iter()
                    .zip(self.lo.iter().zip(&self.hi))
                    .all(|(v, (l, h))| v >= l && v <= h)
            })
            .count();
        inside as f64 / points.len() as f64
    }

    fn cell(&self, p: &[f64], bins: usize) -> Option<usize> {
        let mut idx = 0usize;
        for (axis, v) in p.iter().enumerate() {
            let (l, h) = (self.lo[axis], self.hi[axis]);
            if !(*v >= l && *v <= h) {
                return None;
            }
            let b = (((v - l) / (h - l)) * bins as f64).floor() as usize;
            idx = idx * bins + b.min(bins - 1);
        }
        Some(idx)
    }
}

/// Histogram estimate of total variation with an overflow cell, for
/// samples in `R^1` or `R^2` (sizes may differ).
pub fn tv_histogram(a: &[Vec<f64>], b: &[Vec<f64>], bins: usize, range: &RangeBox) -> Result<f64> {
    range.validate()?;
    let k = range.lo.len();
    if k > 2 {
        return Err(Error::Argument("histogram TV supports at most two axes".into()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("samples must be non-empty".into()));
    }
    if bins == 0 {
        return Err(Error::Argument("need at least one bin".into()));
    }
    if a.iter().chain(b).any(|p| p.len() != k) {
        return Err(Error::Argument("sample dimension does not match box".into()));
    }
    let cells = bins.pow(k as u32);
    let count = |s: &[Vec<f64>]| {
        let mut h = vec![0usize; cells + 1];
        for p in s {
            h[range.cell(p, bins).unwrap_or(cells)] += 1;
        }
        h
    };
    let (ha, hb) = (count(a), count(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let l1: f64 = ha
        .iter()
        .zip(&hb)
        .map(|(x, y)| (*x as f64 / na - *y as f64 / nb).abs())
        .sum();
    Ok((0.5 * l1).min(1.0))
}

/// Functional averaged by [`empirical_moment`].
#[derive(Debug, Clone, Copy)]
pub enum Functional<'a> {
    /// `|m|^{2p}`.
    NormM,
    /// `|x|^{2p}`.
    NormX,
    /// `V(m, x)^p`.
    LyapunovV {
        params: &'a ModelParams,
        lyapunov: &'a LyapunovParams,
        objective: &'a Objective,
    },
}

pub fn empirical_moment(e: &Ensemble, p: f64, functional: Functional<'_>) -> Result<f64> {
    if e.is_empty() {
        return Err(Error::Argument("empty ensemble".into()));
    }
    if !(p >= 1.0) {
        return Err(Error::Argument("moment order must be >= 1".into()));
    }
    let d = e.dim / 2;
    let total: f64 = e
        .points
        .iter()
        .map(|z| match functional {
            Functional::NormM => norm_sq(&z[..d]).powf(p),
            Functional::NormX => norm_sq(&z[d..]).powf(p),
            Functional::LyapunovV {
                params,
                lyapunov,
                objective,
            } => lyapunov_value(params, lyapunov, objective, &State::from_slice(z)).powf(p),
        })
        .sum();
    Ok(total / e.len() as f64)
}

/// Least-squares line through `(log η, log distance)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub pairs: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn rate_fit(pairs: &[(f64, f64)]) -> Result<RateFit> {
    if pairs.len() < 3 {
        return Err(Error::Argument("rate fit needs at least 3 pairs".into()));
    }
    if pairs.iter().any(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::Argument("rate fit needs positive scales and distances".into()));
    }
    let xs: Vec<f64> = pairs.iter().map(|(x, _)| x.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|(_, y)| y.ln()).collect();
    let (slope, intercept, r2) = linear_fit(&xs, &ys)?;
    Ok(RateFit {
        pairs: pairs.to_vec(),
        slope,
        intercept,
        r2,
    })
}

/// Ordinary least squares `y ≈ slope·x + intercept`, with `R²`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::Argument("linear fit needs two or more paired values".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::Argument("fit abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy > 0.0 { sxy * sxy / (sxx * syy) } else { 1.0 };
    Ok((slope, intercept, r2))
}
