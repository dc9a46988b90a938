//! The Lyapunov function
//! `V(m, x) = f(x) + (γ²/4)(|x + m/γ|² + |m/γ|² − λ|x|²)`,
//! its generator under the Langevin diffusion, and the sampled checks of the
//! drift inequality `𝒜V ≤ −λγ V + (γÅ + dβ²)/2` and its supporting bounds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{ModelParams, State};
use crate::error::{Error, Result};
use crate::linalg::{dot, norm_sq};
use crate::objective::{sample_ball, InequalityCheck, Objective, ObjectiveKind};

/// Drift tolerance used by [`drift_check`] unless overridden.
pub const DRIFT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovParams {
    pub lambda: f64,
    #[serde(rename = "ringA")]
    pub ring_a: f64,
}

/// Largest admissible `λ = min{1/4, a/(4L + γ²)}`.
pub fn lambda_max(p: &ModelParams, obj: &Objective) -> f64 {
    let c = &obj.constants;
    (0.25f64).min(c.dissipativity_slope / (4.0 * c.smoothness + p.gamma * p.gamma))
}

/// Smallest admissible `Å = K + 2λ(B²/(2L) + A)`.
pub fn ring_a_min(lambda: f64, obj: &Objective) -> f64 {
    let c = &obj.constants;
    c.k + 2.0 * lambda * (c.grad0_bound * c.grad0_bound / (2.0 * c.smoothness) + c.f0_bound)
}

impl LyapunovParams {
    pub fn new(lambda: f64, ring_a: f64, p: &ModelParams, obj: &Objective) -> Result<Self> {
        let lp = Self { lambda, ring_a };
        lp.validate(p, obj)?;
        Ok(lp)
    }

    /// The largest `λ` and the matching smallest `Å`.
    pub fn default_for(p: &ModelParams, obj: &Objective) -> Self {
        let lambda = lambda_max(p, obj);
        Self {
            lambda,
            ring_a: ring_a_min(lambda, obj),
        }
    }

    pub fn validate(&self, p: &ModelParams, obj: &Objective) -> Result<()> {
        let max = lambda_max(p, obj);
        if !(self.lambda > 0.0 && self.lambda <= max * (1.0 + 1e-15)) {
            return Err(Error::Config(format!(
                "lambda must lie in (0, {max}], got {}",
                self.lambda
            )));
        }
        let min = ring_a_min(self.lambda, obj);
        if !(self.ring_a >= min * (1.0 - 1e-15)) {
            return Err(Error::Config(format!(
                "ringA must be at least {min}, got {}",
                self.ring_a
            )));
        }
        Ok(())
    }
}

pub fn lyapunov_value(p: &ModelParams, lp: &LyapunovParams, obj: &Objective, s: &State) -> f64 {
    let g = p.gamma;
    let mut shifted = 0.0;
    let mut scaled = 0.0;
    for (m, x) in s.m.iter().zip(&s.x) {
        let u = x + m / g;
        shifted += u * u;
        scaled += (m / g) * (m / g);
    }
    obj.value(&s.x) + 0.25 * g * g * (shifted + scaled - lp.lambda * norm_sq(&s.x))
}

/// `∇_m V = m + (γ/2) x`.
pub fn grad_m_v(p: &ModelParams, s: &State) -> Vec<f64> {
    s.m.iter().zip(&s.x).map(|(m, x)| m + 0.5 * p.gamma * x).collect()
}

/// `∇_x V = ∇f(x) + (γ²(1−λ)/2) x + (γ/2) m`.
pub fn grad_x_v(p: &ModelParams, lp: &LyapunovParams, obj: &Objective, s: &State) -> Vec<f64> {
    let mut g = vec![0.0; s.dim()];
    obj.grad_into(&s.x, &mut g);
    let cx = 0.5 * p.gamma * p.gamma * (1.0 - lp.lambda);
    for i in 0..g.len() {
        g[i] += cx * s.x[i] + 0.5 * p.gamma * s.m[i];
    }
    g
}

/// `𝒜V = −⟨∇_m V, γm + ∇f(x)⟩ + ⟨∇_x V, m⟩ + β² d / 2`, from the closed-form
/// partial derivatives (`Δ_m V = d`).
pub fn generator_apply_v(p: &ModelParams, lp: &LyapunovParams, obj: &Objective, s: &State) -> f64 {
    let mut grad = vec![0.0; s.dim()];
    obj.grad_into(&s.x, &mut grad);
    let gm = grad_m_v(p, s);
    let gx = grad_x_v(p, lp, obj, s);
    let drift_m: Vec<f64> = s.m.iter().zip(&grad).map(|(m, g)| p.gamma * m + g).collect();
    -dot(&gm, &drift_m) + dot(&gx, &s.m) + 0.5 * p.beta * p.beta * s.dim() as f64
}

/// Constant term `(γÅ + dβ²)/2` of the drift inequality.
pub fn drift_constant(p: &ModelParams, lp: &LyapunovParams, dim: usize) -> f64 {
    0.5 * (p.gamma * lp.ring_a + dim as f64 * p.beta * p.beta)
}

/// `−λγV + (γÅ + dβ²)/2 − 𝒜V`; non-negative where the drift inequality holds.
pub fn drift_margin(p: &ModelParams, lp: &LyapunovParams, obj: &Objective, s: &State) -> f64 {
    let v = lyapunov_value(p, lp, obj, s);
    -lp.lambda * p.gamma * v + drift_constant(p, lp, s.dim()) - generator_apply_v(p, lp, obj, s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolatingPoint {
    pub m: Vec<f64>,
    pub x: Vec<f64>,
    pub margin: f64,
}

/// Drift-check report, serialized as `{points, worst_margin, violating_points}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub points: usize,
    pub worst_margin: f64,
    pub violating_points: Vec<ViolatingPoint>,
}

impl DriftReport {
    pub fn pass(&self) -> bool {
        self.violating_points.is_empty()
    }
}

/// Phase-space points with `m` and `x` drawn uniformly from balls of the
/// given radius.
pub fn sample_states(dim: usize, count: usize, radius: f64, seed: u64) -> Vec<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let m = sample_ball(&mut rng, dim, radius);
            let x = sample_ball(&mut rng, dim, radius);
            State { m, x }
        })
        .collect()
}

/// Evaluates the drift inequality at `points` random states; a point
/// violates it when its margin is below `-tolerance`.
pub fn drift_check(
    p: &ModelParams,
    lp: &LyapunovParams,
    obj: &Objective,
    points: usize,
    radius: f64,
    seed: u64,
    tolerance: f64,
) -> DriftReport {
    let mut worst = f64::INFINITY;
    let mut violating = Vec::new();
    for s in sample_states(obj.dim, points, radius, seed) {
        let margin = drift_margin(p, lp, obj, &s);
        if margin < worst || margin.is_nan() {
            worst = margin;
        }
        if !(margin >= -tolerance) {
            violating.push(ViolatingPoint {
                m: s.m,
                x: s.x,
                margin,
            });
        }
    }
    DriftReport {
        points,
        worst_margin: if points == 0 { 0.0 } else { worst },
        violating_points: violating,
    }
}

const ROUNDING: f64 = 1e-12;

/// Checks `⟨x, ∇f⟩ ≥ a|x|²/2 − K` and `a|x|²/2 − K ≥ 2λ(f + γ²|x|²/4) − Å`.
pub fn dissipativity_check(
    obj: &Objective,
    lp: &LyapunovParams,
    p: &ModelParams,
    sample_count: usize,
    radius: f64,
    seed: u64,
) -> Vec<InequalityCheck> {
    let c = &obj.constants;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first = InequalityCheck::tracker("gradient dissipation");
    let mut second = InequalityCheck::tracker("dissipation vs Lyapunov");
    let mut grad = vec![0.0; obj.dim];
    for _ in 0..sample_count {
        let x = sample_ball(&mut rng, obj.dim, radius);
        obj.grad_into(&x, &mut grad);
        let x2 = norm_sq(&x);
        let lhs = dot(&x, &grad);
        let mid = 0.5 * c.dissipativity_slope * x2 - c.k;
        let rhs = 2.0 * lp.lambda * (obj.value(&x) + 0.25 * p.gamma * p.gamma * x2) - lp.ring_a;
        let scale = 1.0 + lhs.abs() + mid.abs() + rhs.abs();
        first.observe(lhs - mid, ROUNDING * scale, &[&x]);
        second.observe(mid - rhs, ROUNDING * scale, &[&x]);
    }
    vec![first.finish(), second.finish()]
}

/// Checks `a|x|²/2 − (K/2) log 3 ≤ f(x) ≤ L|x|² + B²/(2L) + A`.
pub fn quadratic_sandwich_check(
    obj: &Objective,
    sample_count: usize,
    radius: f64,
    seed: u64,
) -> Vec<InequalityCheck> {
    let c = &obj.constants;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lower = InequalityCheck::tracker("quadratic lower bound");
    let mut upper = InequalityCheck::tracker("quadratic upper bound");
    let mut points: Vec<Vec<f64>> = vec![vec![0.0; obj.dim]];
    points.extend((0..sample_count).map(|_| sample_ball(&mut rng, obj.dim, radius)));
    for x in &points {
        let f = obj.value(x);
        let x2 = norm_sq(x);
        let lo = 0.5 * c.dissipativity_slope * x2 - 0.5 * c.k * 3f64.ln();
        let hi = c.smoothness * x2
            + c.grad0_bound * c.grad0_bound / (2.0 * c.smoothness)
            + c.f0_bound;
        let scale = 1.0 + f.abs() + lo.abs() + hi.abs();
        lower.observe(f - lo, ROUNDING * scale, &[x]);
        upper.observe(hi - f, ROUNDING * scale, &[x]);
    }
    vec![lower.finish(), upper.finish()]
}

/// Lower envelopes `V ≥ (1−2λ)/(4(1−λ)) |m|²` and `V ≥ (γ²/8)(1−2λ)|x|²`.
pub fn envelope_lower_bounds(p: &ModelParams, lp: &LyapunovParams, s: &State) -> (f64, f64) {
    let l = lp.lambda;
    (
        (1.0 - 2.0 * l) / (4.0 * (1.0 - l)) * norm_sq(&s.m),
        p.gamma * p.gamma / 8.0 * (1.0 - 2.0 * l) * norm_sq(&s.x),
    )
}

/// Checks `V ≥ 0` and both lower envelopes at random states.
pub fn bounds_check(
    p: &ModelParams,
    lp: &LyapunovParams,
    obj: &Objective,
    sample_count: usize,
    radius: f64,
    seed: u64,
) -> Vec<InequalityCheck> {
    let mut nonneg = InequalityCheck::tracker("V non-negative");
    let mut env_m = InequalityCheck::tracker("V momentum envelope");
    let mut env_x = InequalityCheck::tracker("V position envelope");
    for s in sample_states(obj.dim, sample_count, radius, seed) {
        let v = lyapunov_value(p, lp, obj, &s);
        let (bm, bx) = envelope_lower_bounds(p, lp, &s);
        let tol = ROUNDING * (1.0 + v.abs());
        nonneg.observe(v, tol, &[&s.m, &s.x]);
        env_m.observe(v - bm, tol, &[&s.m, &s.x]);
        env_x.observe(v - bx, tol, &[&s.m, &s.x]);
    }
    vec![nonneg.finish(), env_m.finish(), env_x.finish()]
}

/// Unnormalized stationary log-density `−(γ/β²)(|m|² + 2f(x))`.
pub fn stationary_log_density(p: &ModelParams, obj: &Objective, s: &State) -> f64 {
    -(p.gamma / (p.beta * p.beta)) * (norm_sq(&s.m) + 2.0 * obj.value(&s.x))
}

/// Per-coordinate stationary variances of the quadratic well.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryMoments {
    pub var_m: f64,
    pub var_x: f64,
}

/// `Var(m) = β²/(2γ)`, `Var(x) = β²/(2γs)` per coordinate.
pub fn quadratic_stationary_moments(p: &ModelParams, obj: &Objective) -> Result<StationaryMoments> {
    match obj.kind {
        ObjectiveKind::QuadraticWell { scale } => {
            if p.gamma <= 0.0 || scale <= 0.0 {
                return Err(Error::Domain("stationary law needs γ > 0 and s > 0".into()));
            }
            let var_m = p.beta * p.beta / (2.0 * p.gamma);
            Ok(StationaryMoments {
                var_m,
                var_x: var_m / scale,
            })
        }
        _ => Err(Error::UnsupportedObjective(
            "closed-form stationary moments need a quadratic well".into(),
        )),
    }
}

/// Stationary mean of `V` for the quadratic well; `m` and `x` are
/// independent under the stationary law, so the cross term vanishes.
pub fn quadratic_stationary_mean_v(
    p: &ModelParams,
    lp: &LyapunovParams,
    obj: &Objective,
) -> Result<f64> {
    let mom = quadratic_stationary_moments(p, obj)?;
    let d = obj.dim as f64;
    let g = p.gamma;
    let s = obj.scale();
    Ok(d * (0.5 * s * mom.var_x + 0.25 * g * g * (1.0 - lp.lambda) * mom.var_x + 0.5 * mom.var_m))
}

/// Moment envelope `e^{−rate·t} V₀ + Ĉ d`.
pub fn moment_envelope(t: f64, rate: f64, v0: f64, c_hat: f64, dim: usize) -> f64 {
    (-rate * t).exp() * v0 + c_hat * dim as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(gamma: f64, beta: f64, d: usize) -> ModelParams {
        ModelParams::new(gamma, beta, 1, d).unwrap()
    }

    /// Finite-difference generator: central differences of V in both
    /// blocks, plus `β²/2` times the trace of the momentum Hessian.
    fn fd_generator(p: &ModelParams, lp: &LyapunovParams, obj: &Objective, s: &State) -> f64 {
        let h = 1e-4;
        let v = |st: &State| lyapunov_value(p, lp, obj, st);
        let grad = obj.grad_f(&s.x).unwrap();
        let mut out = 0.0;
        for i in 0..s.dim() {
            let mut up = s.clone();
            let mut dn = s.clone();
            up.m[i] += h;
            dn.m[i] -= h;
            let dm = (v(&up) - v(&dn)) / (2.0 * h);
            let d2m = (v(&up) - 2.0 * v(s) + v(&dn)) / (h * h);
            let mut up = s.clone();
            let mut dn = s.clone();
            up.x[i] += h;
            dn.x[i] -= h;
            let dx = (v(&up) - v(&dn)) / (2.0 * h);
            out += -(p.gamma * s.m[i] + grad[i]) * dm + s.m[i] * dx + 0.5 * p.beta * p.beta * d2m;
        }
        out
    }

    #[test]
    fn zero_at_origin() {
        let obj = Objective::quadratic_well(2, 1.0).unwrap();
        let p = params(2.0, 1.0, 2);
        let lp = LyapunovParams::default_for(&p, &obj);
        assert_eq!(lyapunov_value(&p, &lp, &obj, &State::zeros(2)), 0.0);
    }

    #[test]
    fn hand_substitution() {
        let obj = Objective::quadratic_well(1, 1.0).unwrap();
        let p = params(2.0, 1.0, 1);
        let lp = LyapunovParams { lambda: 0.25, ring_a: 0.0 };
        let s = State::new(vec![1.0], vec![0.0]).unwrap();
        assert_relative_eq!(lyapunov_value(&p, &lp, &obj, &s), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn generator_at_origin_is_laplacian_term() {
        let obj = Objective::quadratic_well(3, 1.0).unwrap();
        let p = params(5.0, 0.7, 3);
        let lp = LyapunovParams::default_for(&p, &obj);
        assert_relative_eq!(
            generator_apply_v(&p, &lp, &obj, &State::zeros(3)),
            3.0 * 0.49 / 2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn generator_matches_finite_differences() {
        let objs = [
            Objective::quadratic_well(1, 1.0).unwrap(),
            Objective::cosine_perturbed(2, 1.0, 0.3).unwrap(),
        ];
        for obj in &objs {
            let p = params(5.0, 1.0, obj.dim);
            let lp = LyapunovParams::default_for(&p, obj);
            if obj.dim == 1 {
                assert_relative_eq!(lp.lambda, 1.0 / 29.0, epsilon = 1e-15);
            }
            for s in sample_states(obj.dim, 100, 3.0, 11) {
                let exact = generator_apply_v(&p, &lp, obj, &s);
                let fd = fd_generator(&p, &lp, obj, &s);
                let scale = exact.abs().max(1.0);
                assert!((exact - fd).abs() <= 1e-6 * scale, "{exact} vs {fd}");
            }
        }
    }

    #[test]
    fn closed_form_gradients_match_finite_differences() {
        let obj = Objective::cosine_perturbed(2, 1.2, 0.5).unwrap();
        let p = params(4.0, 1.0, 2);
        let lp = LyapunovParams::default_for(&p, &obj);
        let s = State::new(vec![0.3, -1.1], vec![2.0, 0.4]).unwrap();
        let gm = grad_m_v(&p, &s);
        let gx = grad_x_v(&p, &lp, &obj, &s);
        let h = 1e-6;
        for i in 0..2 {
            let mut a = s.clone();
            let mut b = s.clone();
            a.m[i] += h;
            b.m[i] -= h;
            let fd = (lyapunov_value(&p, &lp, &obj, &a) - lyapunov_value(&p, &lp, &obj, &b)) / (2.0 * h);
            assert_relative_eq!(gm[i], fd, epsilon = 1e-7);
            let mut a = s.clone();
            let mut b = s.clone();
            a.x[i] += h;
            b.x[i] -= h;
            let fd = (lyapunov_value(&p, &lp, &obj, &a) - lyapunov_value(&p, &lp, &obj, &b)) / (2.0 * h);
            assert_relative_eq!(gx[i], fd, epsilon = 1e-7);
        }
    }

    #[test]
    fn drift_inequality_holds_for_builtins() {
        for d in [1, 4] {
            for obj in [
                Objective::quadratic_well(d, 1.0).unwrap(),
                Objective::cosine_perturbed(d, 1.0, 0.5).unwrap(),
            ] {
                let p = params(5.0, 1.0, d);
                let lp = LyapunovParams::default_for(&p, &obj);
                let r = drift_check(&p, &lp, &obj, 10_000, 10.0, 1, DRIFT_TOLERANCE);
                assert!(r.pass(), "{:?} d={d}: {}", obj.kind, r.worst_margin);
            }
        }
    }

    #[test]
    fn bounds_hold() {
        let obj = Objective::cosine_perturbed(2, 1.0, 0.4).unwrap();
        let p = params(3.0, 1.0, 2);
        let lp = LyapunovParams::default_for(&p, &obj);
        assert!(bounds_check(&p, &lp, &obj, 10_000, 10.0, 5).iter().all(|c| c.pass));
    }

    #[test]
    fn dissipativity_chain() {
        let obj = Objective::quadratic_well(2, 1.0).unwrap();
        let p = params(5.0, 1.0, 2);
        let lp = LyapunovParams::default_for(&p, &obj);
        let checks = dissipativity_check(&obj, &lp, &p, 1000, 10.0, 2);
        assert!(checks.iter().all(|c| c.pass));
        // margin |x|²/2 + K, K = 0
        assert!(checks[0].worst_margin >= 0.0);

        let cos = Objective::cosine_perturbed(3, 1.0, 0.3).unwrap();
        let lp = LyapunovParams::default_for(&p, &cos);
        assert!(dissipativity_check(&cos, &lp, &p, 10_000, 10.0, 3).iter().all(|c| c.pass));

        let bad = LyapunovParams { lambda: 0.25, ring_a: 0.0 };
        let checks = dissipativity_check(&obj, &bad, &p, 1000, 10.0, 4);
        assert!(!checks[1].pass);
        assert!(!checks[1].witness.is_empty());
    }

    #[test]
    fn sandwich() {
        let q = Objective::quadratic_well(2, 1.0).unwrap();
        let checks = quadratic_sandwich_check(&q, 1000, 5.0, 1);
        assert!(checks.iter().all(|c| c.pass));
        assert!(checks[0].worst_margin.abs() < 1e-12);
        let c = Objective::cosine_perturbed(2, 1.0, 0.5).unwrap();
        assert!(quadratic_sandwich_check(&c, 10_000, 20.0, 2).iter().all(|c| c.pass));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        let obj = Objective::quadratic_well(1, 1.0).unwrap();
        let p = params(5.0, 1.0, 1);
        assert!(LyapunovParams::new(0.1, 0.0, &p, &obj).is_err());
        assert!(LyapunovParams::new(0.0, 0.0, &p, &obj).is_err());
        assert!(LyapunovParams::new(1.0 / 29.0, 0.0, &p, &obj).is_ok());
    }

    #[test]
    fn stationary_density_and_moments() {
        let obj = Objective::quadratic_well(1, 1.0).unwrap();
        let p = params(5.0, 1.0, 1);
        assert_eq!(stationary_log_density(&p, &obj, &State::zeros(1)), 0.0);
        let s = State::new(vec![1.0], vec![0.0]).unwrap();
        assert_relative_eq!(stationary_log_density(&p, &obj, &s), -5.0, epsilon = 1e-15);
        let mom = quadratic_stationary_moments(&p, &obj).unwrap();
        assert_relative_eq!(mom.var_m, 0.1, epsilon = 1e-15);
        assert_relative_eq!(mom.var_x, 0.1, epsilon = 1e-15);
        let cos = Objective::cosine_perturbed(1, 1.0, 0.1).unwrap();
        assert!(quadratic_stationary_moments(&p, &cos).is_err());
    }

    #[test]
    fn drift_report_json_shape() {
        let obj = Objective::quadratic_well(1, 1.0).unwrap();
        let p = params(5.0, 1.0, 1);
        let lp = LyapunovParams::default_for(&p, &obj);
        let r = drift_check(&p, &lp, &obj, 10, 1.0, 0, DRIFT_TOLERANCE);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["points"], 10);
        assert!(v["worst_margin"].is_number());
        assert!(v["violating_points"].as_array().unwrap().is_empty());
    }
}
