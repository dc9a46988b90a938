//! Step-size sequences `η_k`, cumulative times `t_n`, the step-size
//! conditions and the weighted exponential sum bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScheduleKind {
    Constant { eta: f64 },
    /// `η_k = η / k^α`, `α ∈ (0, 1)`.
    Polynomial { eta: f64, alpha: f64 },
}

fn default_omega() -> f64 {
    0.5
}

fn default_theta() -> f64 {
    1.0
}

fn default_burn_in() -> usize {
    1
}

/// A non-increasing positive step-size sequence with its condition
/// parameters `ω`, `θ` and burn-in index `n₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSchedule {
    #[serde(flatten)]
    pub kind: ScheduleKind,
    #[serde(default = "default_omega")]
    pub omega: f64,
    #[serde(default = "default_theta")]
    pub theta: f64,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
}

impl StepSchedule {
    pub fn new(kind: ScheduleKind, omega: f64, theta: f64, burn_in: usize) -> Result<Self> {
        let s = Self {
            kind,
            omega,
            theta,
            burn_in,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn constant(eta: f64) -> Result<Self> {
        Self::new(ScheduleKind::Constant { eta }, default_omega(), default_theta(), 1)
    }

    pub fn polynomial(eta: f64, alpha: f64) -> Result<Self> {
        Self::new(
            ScheduleKind::Polynomial { eta, alpha },
            default_omega(),
            default_theta(),
            1,
        )
    }

    pub fn with_condition(mut self, omega: f64, theta: f64) -> Result<Self> {
        self.omega = omega;
        self.theta = theta;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            ScheduleKind::Constant { eta } => {
                if !(eta > 0.0 && eta.is_finite()) {
                    return Err(Error::Config("step size must be positive".into()));
                }
            }
            ScheduleKind::Polynomial { eta, alpha } => {
                if !(eta > 0.0 && eta.is_finite()) {
                    return Err(Error::Config("step size must be positive".into()));
                }
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::Config(format!(
                        "polynomial exponent must lie in (0, 1), got {alpha}"
                    )));
                }
            }
        }
        if !(self.omega > 0.0 && self.theta > 0.0) {
            return Err(Error::Config("omega and theta must be positive".into()));
        }
        if self.burn_in == 0 {
            return Err(Error::Config("burn-in index starts at 1".into()));
        }
        Ok(())
    }

    /// Base step `η` (the first step).
    pub fn base(&self) -> f64 {
        match self.kind {
            ScheduleKind::Constant { eta } | ScheduleKind::Polynomial { eta, .. } => eta,
        }
    }

    /// `η_k` for `k ≥ 1`.
    pub fn eta(&self, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::Argument("step index starts at 1".into()));
        }
        Ok(self.eta_at(k))
    }

    #[inline]
    pub(crate) fn eta_at(&self, k: usize) -> f64 {
        match self.kind {
            ScheduleKind::Constant { eta } => eta,
            ScheduleKind::Polynomial { eta, alpha } => eta / (k as f64).powf(alpha),
        }
    }

    /// `η_{k-1}` with the convention `η_0 = η_1`.
    fn eta_prev(&self, k: usize) -> f64 {
        self.eta_at(k.saturating_sub(1).max(1))
    }

    /// `t_n = Σ_{j ≤ n} η_j`, `t_0 = 0`.
    pub fn cumulative_time(&self, n: usize) -> f64 {
        match self.kind {
            ScheduleKind::Constant { eta } => eta * n as f64,
            ScheduleKind::Polynomial { .. } => (1..=n).map(|k| self.eta_at(k)).sum(),
        }
    }

    /// `[t_0, t_1, ..., t_n]`.
    pub fn times(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n + 1);
        let mut t = 0.0;
        out.push(t);
        for k in 1..=n {
            t = match self.kind {
                ScheduleKind::Constant { eta } => eta * k as f64,
                ScheduleKind::Polynomial { .. } => t + self.eta_at(k),
            };
            out.push(t);
        }
        out
    }

    /// Smallest `n` with `t_n ≥ horizon` (within rounding of a grid point).
    pub fn steps_to_reach(&self, horizon: f64) -> usize {
        if horizon <= 0.0 {
            return 0;
        }
        match self.kind {
            ScheduleKind::Constant { eta } => {
                let n = (horizon / eta).round();
                if (n * eta - horizon).abs() <= 1e-9 * horizon {
                    n as usize
                } else {
                    (horizon / eta).ceil() as usize
                }
            }
            ScheduleKind::Polynomial { .. } => {
                let mut t = 0.0;
                let mut k = 0;
                while t < horizon * (1.0 - 1e-12) {
                    k += 1;
                    t += self.eta_at(k);
                }
                k
            }
        }
    }

    fn check_condition_params(&self, theta: f64) -> Result<()> {
        if !(self.omega > 0.0 && self.omega < 2.0 * theta) {
            return Err(Error::Config(format!(
                "omega must lie in (0, 2 theta) = (0, {}), got {}",
                2.0 * theta,
                self.omega
            )));
        }
        Ok(())
    }

    /// Checks `η_k ≤ (2θ − ω)/(2θ²)` and `η_{k−1} − η_k ≤ ω η_k²` for
    /// `burn_in ≤ k ≤ k_max`, and reports the smallest `n₀` from which both
    /// hold up to `k_max`.
    pub fn check_step_conditions(&self, k_max: usize) -> Result<StepConditionReport> {
        self.check_condition_params(self.theta)?;
        if k_max == 0 {
            return Err(Error::Argument("k_max must be at least 1".into()));
        }
        let cap = (2.0 * self.theta - self.omega) / (2.0 * self.theta * self.theta);
        let mut last_fail = 0usize;
        let mut first_fail_after_burn_in = None;
        for k in 1..=k_max {
            let eta = self.eta_at(k);
            let size_ok = eta <= cap;
            let diff_ok = k == 1 || self.eta_prev(k) - eta <= self.omega * eta * eta;
            if !(size_ok && diff_ok) {
                last_fail = k;
                if k >= self.burn_in && first_fail_after_burn_in.is_none() {
                    first_fail_after_burn_in = Some(k);
                }
            }
        }
        let n0 = last_fail + 1;
        let regime = if n0 <= 1 {
            ConditionRegime::FromStart
        } else if n0 <= k_max {
            ConditionRegime::Eventually
        } else {
            ConditionRegime::Violated
        };
        Ok(StepConditionReport {
            pass: first_fail_after_burn_in.is_none(),
            k_max,
            step_cap: cap,
            first_violation: first_fail_after_burn_in,
            smallest_valid_n0: (n0 <= k_max).then_some(n0),
            regime,
        })
    }

    /// `Σ_{k=1}^n η_k^{1+ε} e^{−θ(t_n − t_k)}` together with the bound
    /// `4 η_n^ε / (2θ − (4ε − 1) ω)`.
    ///
    /// When `burn_in > 1` the bound applies to the tail sum over
    /// `k ≥ burn_in`; the head is reported separately.
    pub fn weighted_sum(&self, n: usize, eps: f64, theta: f64) -> Result<WeightedSum> {
        if !(0.0..=0.5).contains(&eps) {
            return Err(Error::Argument(format!("eps must lie in [0, 1/2], got {eps}")));
        }
        if !(theta > 0.0) {
            return Err(Error::Argument("theta must be positive".into()));
        }
        self.check_condition_params(theta)?;
        if n == 0 {
            return Err(Error::Argument("n must be at least 1".into()));
        }
        let times = self.times(n);
        let tn = times[n];
        let mut head = 0.0;
        let mut tail = 0.0;
        for k in 1..=n {
            let term = self.eta_at(k).powf(1.0 + eps) * (-theta * (tn - times[k])).exp();
            if k < self.burn_in {
                head += term;
            } else {
                tail += term;
            }
        }
        let bound = 4.0 * self.eta_at(n).powf(eps) / (2.0 * theta - (4.0 * eps - 1.0) * self.omega);
        Ok(WeightedSum {
            sum: head + tail,
            head_sum: head,
            tail_sum: tail,
            bound,
            holds: tail <= bound,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionRegime {
    /// Both conditions hold from `k = 1`.
    FromStart,
    /// Both conditions hold from some `n₀ > 1` up to `k_max`.
    Eventually,
    /// Violated at `k_max` itself.
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepConditionReport {
    /// True when no violation occurs in `[burn_in, k_max]`.
    pub pass: bool,
    pub k_max: usize,
    /// `(2θ − ω)/(2θ²)`.
    pub step_cap: f64,
    pub first_violation: Option<usize>,
    pub smallest_valid_n0: Option<usize>,
    pub regime: ConditionRegime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedSum {
    pub sum: f64,
    pub head_sum: f64,
    pub tail_sum: f64,
    pub bound: f64,
    pub holds: bool,
}
