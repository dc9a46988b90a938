//! Target functions `f`, the additive stochastic-gradient model `∇F(x, ξ)`,
//! and the ledger of declared constants with sampled self-verification.
//!
//! Two objectives are built in:
//!
//! * `QuadraticWell`: `f(x) = s|x|²/2`, for which every constant is exact.
//! * `CosinePerturbedQuadratic`: `f(x) = s|x|²/2 + amp Σ (1 + cos xᵢ)`, a
//!   non-negative, nonconvex-for-large-amp perturbation of the well.
//!
//! Gradient noise is additive and independent of `x`, so `sup_x` in the
//! moment conditions is trivial and the moment constants have closed forms.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{all_finite, dot, euclidean, norm, sym_op_norm};

/// Constants of the standing assumptions on `f` and on the gradient noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveConstants {
    /// Bound on `|f(0)|`.
    #[serde(rename = "A")]
    pub f0_bound: f64,
    /// Bound on `|∇f(0)|`.
    #[serde(rename = "B")]
    pub grad0_bound: f64,
    /// Lipschitz constant of `∇f`.
    #[serde(rename = "L")]
    pub smoothness: f64,
    /// Dissipativity slope.
    #[serde(rename = "a")]
    pub dissipativity_slope: f64,
    /// Dissipativity offset.
    #[serde(rename = "b")]
    pub dissipativity_offset: f64,
    /// `b + B²/(2a)`.
    #[serde(rename = "K")]
    pub k: f64,
    /// `q`-th moment bound of the gradient noise.
    #[serde(rename = "A0")]
    pub noise_moment: f64,
    #[serde(rename = "q")]
    pub noise_order: f64,
    /// `q′`-th moment bound of the gradient noise.
    #[serde(rename = "A0p")]
    pub noise_moment_high: f64,
    #[serde(rename = "qp")]
    pub noise_order_high: f64,
    /// 8th-moment bound of `sup_x ‖∇²F‖`.
    #[serde(rename = "B1")]
    pub hessian_bound: f64,
    /// Bound on third-derivative operator norms.
    #[serde(rename = "B2")]
    pub third_derivative_bound: f64,
}

impl ObjectiveConstants {
    /// Builds the ledger, computing `K` from `b`, `B` and `a`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        f0_bound: f64,
        grad0_bound: f64,
        smoothness: f64,
        dissipativity_slope: f64,
        dissipativity_offset: f64,
        noise_moment: f64,
        noise_order: f64,
        noise_moment_high: f64,
        noise_order_high: f64,
        hessian_bound: f64,
        third_derivative_bound: f64,
    ) -> Result<Self> {
        let c = Self {
            f0_bound,
            grad0_bound,
            smoothness,
            dissipativity_slope,
            dissipativity_offset,
            k: dissipativity_offset + grad0_bound * grad0_bound / (2.0 * dissipativity_slope),
            noise_moment,
            noise_order,
            noise_moment_high,
            noise_order_high,
            hessian_bound,
            third_derivative_bound,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.f0_bound,
            self.grad0_bound,
            self.smoothness,
            self.dissipativity_slope,
            self.dissipativity_offset,
            self.noise_moment,
            self.noise_order,
            self.noise_moment_high,
            self.noise_order_high,
            self.hessian_bound,
            self.third_derivative_bound,
        ];
        if all.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Config("constants must be finite and non-negative".into()));
        }
        if self.smoothness <= 0.0 || self.dissipativity_slope <= 0.0 {
            return Err(Error::Config("L and a must be strictly positive".into()));
        }
        if self.noise_order < 2.0 || self.noise_order_high < 4.0 {
            return Err(Error::Config("moment orders need q >= 2 and q' >= 4".into()));
        }
        let k = self.dissipativity_offset
            + self.grad0_bound * self.grad0_bound / (2.0 * self.dissipativity_slope);
        if (k - self.k).abs() > 1e-12 * (1.0 + k.abs()) {
            return Err(Error::Config(format!("K must equal b + B^2/(2a) = {k}")));
        }
        Ok(())
    }

    /// Friction threshold `√2 (2L + a) / √a` required by the contraction regime.
    pub fn friction_threshold(&self) -> f64 {
        let (l, a) = (self.smoothness, self.dissipativity_slope);
        std::f64::consts::SQRT_2 * (2.0 * l + a) / a.sqrt()
    }
}

/// Overrides applied on top of the built-in constants, e.g. to test
/// misdeclarations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantOverrides {
    #[serde(rename = "A", default, skip_serializing_if = "Option::is_none")]
    pub f0_bound: Option<f64>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub grad0_bound: Option<f64>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub smoothness: Option<f64>,
    #[serde(rename = "a", default, skip_serializing_if = "Option::is_none")]
    pub dissipativity_slope: Option<f64>,
    #[serde(rename = "b", default, skip_serializing_if = "Option::is_none")]
    pub dissipativity_offset: Option<f64>,
    #[serde(rename = "B1", default, skip_serializing_if = "Option::is_none")]
    pub hessian_bound: Option<f64>,
    #[serde(rename = "B2", default, skip_serializing_if = "Option::is_none")]
    pub third_derivative_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveKind {
    QuadraticWell { scale: f64 },
    CosinePerturbedQuadratic { scale: f64, amplitude: f64 },
}

/// Additive, state-independent gradient noise `∇F(x, ξ) = ∇f(x) + ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GradNoiseModel {
    /// `ξ ~ N(0, σ² I)`.
    AdditiveGaussian { scale: f64 },
    /// `ξ = σ t` with i.i.d. Student-t coordinates of `dof` degrees of freedom.
    AdditiveStudentT {
        scale: f64,
        #[serde(default = "default_dof")]
        dof: f64,
    },
}

fn default_dof() -> f64 {
    9.0
}

/// One realization of the gradient noise.
pub type GradNoise = Vec<f64>;

impl GradNoiseModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GradNoiseModel::AdditiveGaussian { scale } => {
                if !(scale >= 0.0 && scale.is_finite()) {
                    return Err(Error::Config("noise scale must be >= 0".into()));
                }
            }
            GradNoiseModel::AdditiveStudentT { scale, dof } => {
                if !(scale >= 0.0 && scale.is_finite()) {
                    return Err(Error::Config("noise scale must be >= 0".into()));
                }
                if !(dof > 4.0 && dof.is_finite()) {
                    return Err(Error::Config(format!(
                        "student-t dof must exceed q' = 4 (got {dof})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn scale(&self) -> f64 {
        match *self {
            GradNoiseModel::AdditiveGaussian { scale } => scale,
            GradNoiseModel::AdditiveStudentT { scale, .. } => scale,
        }
    }

    /// Closed-form `E|ξ|²` for a `dim`-dimensional draw.
    pub fn second_moment(&self, dim: usize) -> f64 {
        let d = dim as f64;
        match *self {
            GradNoiseModel::AdditiveGaussian { scale } => scale * scale * d,
            GradNoiseModel::AdditiveStudentT { scale, dof } => scale * scale * d * dof / (dof - 2.0),
        }
    }

    /// Closed-form `E|ξ|⁴`.
    pub fn fourth_moment(&self, dim: usize) -> f64 {
        let d = dim as f64;
        match *self {
            GradNoiseModel::AdditiveGaussian { scale } => scale.powi(4) * d * (d + 2.0),
            GradNoiseModel::AdditiveStudentT { scale, dof } => {
                let m2 = dof / (dof - 2.0);
                let m4 = 3.0 * dof * dof / ((dof - 2.0) * (dof - 4.0));
                scale.powi(4) * (d * m4 + d * (d - 1.0) * m2 * m2)
            }
        }
    }

    /// Draws one noise vector.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, dim: usize) -> GradNoise {
        let mut out = vec![0.0; dim];
        self.sample_into(rng, &mut out);
        out
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        match *self {
            GradNoiseModel::AdditiveGaussian { scale } => {
                for v in out.iter_mut() {
                    let z: f64 = StandardNormal.sample(rng);
                    *v = scale * z;
                }
            }
            GradNoiseModel::AdditiveStudentT { scale, dof } => {
                let t = StudentT::new(dof).expect("dof validated");
                for v in out.iter_mut() {
                    *v = scale * t.sample(rng);
                }
            }
        }
    }
}

/// A target `f` on `R^d` with its declared constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub dim: usize,
    pub kind: ObjectiveKind,
    pub constants: ObjectiveConstants,
}

impl Objective {
    /// Builds an objective whose constant ledger is computed from the
    /// built-in formulas for `kind` and the noise model.
    pub fn new(dim: usize, kind: ObjectiveKind, noise: &GradNoiseModel) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        noise.validate()?;
        let d = dim as f64;
        let (f0, g0, l, a, b, b2) = match kind {
            ObjectiveKind::QuadraticWell { scale } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::Config("quadratic scale must be positive".into()));
                }
                (0.0, 0.0, scale, scale, 0.0, 0.0)
            }
            ObjectiveKind::CosinePerturbedQuadratic { scale, amplitude } => {
                if !(scale > 0.0 && scale.is_finite()) {
                    return Err(Error::Config("cosine scale must be positive".into()));
                }
                if !(amplitude >= 0.0 && amplitude < 2.0 * scale) {
                    return Err(Error::Config("cosine amplitude must lie in [0, 2 scale)".into()));
                }
                let l = scale + amplitude;
                // per coordinate: amp·u·min(u, 2) - amp·u²/2 <= 2 amp <= amp (1 + L)
                (
                    2.0 * amplitude * d,
                    0.0,
                    l,
                    scale - 0.5 * amplitude,
                    amplitude * d * (1.0 + l),
                    amplitude,
                )
            }
        };
        let constants = ObjectiveConstants::new(
            f0,
            g0,
            l,
            a,
            b,
            noise.second_moment(dim).sqrt(),
            2.0,
            noise.fourth_moment(dim).powf(0.25),
            4.0,
            l,
            b2,
        )?;
        Ok(Self { dim, kind, constants })
    }

    pub fn quadratic_well(dim: usize, scale: f64) -> Result<Self> {
        Self::new(
            dim,
            ObjectiveKind::QuadraticWell { scale },
            &GradNoiseModel::AdditiveGaussian { scale: 0.0 },
        )
    }

    pub fn cosine_perturbed(dim: usize, scale: f64, amplitude: f64) -> Result<Self> {
        Self::new(
            dim,
            ObjectiveKind::CosinePerturbedQuadratic { scale, amplitude },
            &GradNoiseModel::AdditiveGaussian { scale: 0.0 },
        )
    }

    /// Replaces declared constants (the ledger is re-validated, `K` recomputed).
    pub fn with_overrides(mut self, o: &ConstantOverrides) -> Result<Self> {
        let c = &mut self.constants;
        if let Some(v) = o.f0_bound {
            c.f0_bound = v;
        }
        if let Some(v) = o.grad0_bound {
            c.grad0_bound = v;
        }
        if let Some(v) = o.smoothness {
            c.smoothness = v;
        }
        if let Some(v) = o.dissipativity_slope {
            c.dissipativity_slope = v;
        }
        if let Some(v) = o.dissipativity_offset {
            c.dissipativity_offset = v;
        }
        if let Some(v) = o.hessian_bound {
            c.hessian_bound = v;
        }
        if let Some(v) = o.third_derivative_bound {
            c.third_derivative_bound = v;
        }
        c.k = c.dissipativity_offset + c.grad0_bound * c.grad0_bound / (2.0 * c.dissipativity_slope);
        c.validate()?;
        Ok(self)
    }

    /// Curvature scale `s` of the quadratic part.
    pub fn scale(&self) -> f64 {
        match self.kind {
            ObjectiveKind::QuadraticWell { scale } => scale,
            ObjectiveKind::CosinePerturbedQuadratic { scale, .. } => scale,
        }
    }

    pub fn is_quadratic(&self) -> bool {
        matches!(self.kind, ObjectiveKind::QuadraticWell { .. })
    }

    /// Global minimizer and minimum value, when known in closed form.
    pub fn minimum(&self) -> Option<(Vec<f64>, f64)> {
        match self.kind {
            ObjectiveKind::QuadraticWell { .. } => Some((vec![0.0; self.dim], 0.0)),
            // strictly convex when amp < scale; x = 0 is the stationary point
            ObjectiveKind::CosinePerturbedQuadratic { scale, amplitude } if amplitude < scale => {
                Some((vec![0.0; self.dim], 2.0 * amplitude * self.dim as f64))
            }
            ObjectiveKind::CosinePerturbedQuadratic { .. } => None,
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self.kind {
            ObjectiveKind::QuadraticWell { scale } => 0.5 * scale * dot(x, x),
            ObjectiveKind::CosinePerturbedQuadratic { scale, amplitude } => {
                0.5 * scale * dot(x, x) + amplitude * x.iter().map(|v| 1.0 + v.cos()).sum::<f64>()
            }
        }
    }

    /// `∇f(x)` written into `out`, without input checks.
    #[inline]
    pub fn grad_into(&self, x: &[f64], out: &mut [f64]) {
        match self.kind {
            ObjectiveKind::QuadraticWell { scale } => {
                for (o, v) in out.iter_mut().zip(x) {
                    *o = scale * v;
                }
            }
            ObjectiveKind::CosinePerturbedQuadratic { scale, amplitude } => {
                for (o, v) in out.iter_mut().zip(x) {
                    *o = scale * v - amplitude * v.sin();
                }
            }
        }
    }

    pub fn grad_f(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let mut out = vec![0.0; self.dim];
        self.grad_into(x, &mut out);
        Ok(out)
    }

    /// Hessian in row-major order.
    pub fn hessian(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        let mut h = vec![0.0; d * d];
        for i in 0..d {
            h[i * d + i] = match self.kind {
                ObjectiveKind::QuadraticWell { scale } => scale,
                ObjectiveKind::CosinePerturbedQuadratic { scale, amplitude } => {
                    scale - amplitude * x[i].cos()
                }
            };
        }
        h
    }

    /// Operator norm of `∇³f(x)`. Both built-ins have diagonal third
    /// derivatives, whose operator norm is the largest diagonal magnitude.
    pub fn third_derivative_op_norm(&self, x: &[f64]) -> f64 {
        match self.kind {
            ObjectiveKind::QuadraticWell { .. } => 0.0,
            ObjectiveKind::CosinePerturbedQuadratic { amplitude, .. } => x
                .iter()
                .map(|v| (amplitude * v.sin()).abs())
                .fold(0.0, f64::max),
        }
    }

    /// `∇F(x, ξ) = ∇f(x) + ξ`.
    pub fn stoch_grad(&self, x: &[f64], xi: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        if xi.len() != self.dim || !all_finite(xi) {
            return Err(Error::Domain("noise draw must be finite with matching dimension".into()));
        }
        let mut g = vec![0.0; self.dim];
        self.grad_into(x, &mut g);
        for (gi, n) in g.iter_mut().zip(xi) {
            *gi += n;
        }
        Ok(g)
    }

    /// Mini-batch mean `(1/N) Σ ∇F(x, ξⁱ)`, evaluated as `∇f(x) + mean(ξⁱ)`.
    pub fn minibatch_grad(&self, x: &[f64], batch: &[GradNoise]) -> Result<Vec<f64>> {
        if batch.is_empty() {
            return Err(Error::Argument("mini-batch must contain at least one draw".into()));
        }
        self.check_point(x)?;
        let mut g = vec![0.0; self.dim];
        self.minibatch_grad_into(x, batch, &mut g);
        if !all_finite(&g) {
            return Err(Error::Domain("non-finite mini-batch gradient".into()));
        }
        Ok(g)
    }

    #[inline]
    pub fn minibatch_grad_into(&self, x: &[f64], batch: &[GradNoise], out: &mut [f64]) {
        self.grad_into(x, out);
        let inv = 1.0 / batch.len() as f64;
        for (i, o) in out.iter_mut().enumerate() {
            let s: f64 = batch.iter().map(|b| b[i]).sum();
            *o += s * inv;
        }
    }

    /// `F(x, ξ) = f(x) + ⟨ξ, x⟩`, whose mean over `ξ` is `f(x)` and whose
    /// gradient is the additive model above.
    pub fn stoch_value(&self, x: &[f64], xi: &[f64]) -> f64 {
        self.value(x) + dot(xi, x)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::Argument(format!(
                "expected a point of dimension {}, got {}",
                self.dim,
                x.len()
            )));
        }
        if !all_finite(x) {
            return Err(Error::Domain("non-finite input".into()));
        }
        Ok(())
    }
}

/// Uniform draw from the closed ball of the given radius in `R^dim`.
pub fn sample_ball<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    let n = norm(&v);
    let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
    if n > 0.0 {
        v.iter_mut().for_each(|c| *c *= r / n);
    }
    v
}

/// Outcome of one sampled inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub name: String,
    pub pass: bool,
    /// Smallest observed `rhs - lhs` (non-negative when the inequality holds).
    pub worst_margin: f64,
    /// Points realizing the worst margin when the check fails.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witness: Vec<Vec<f64>>,
}

impl InequalityCheck {
    pub(crate) fn tracker(name: &str) -> MarginTracker {
        MarginTracker {
            name: name.to_string(),
            worst: f64::INFINITY,
            worst_pass_slack: f64::INFINITY,
            witness: Vec::new(),
        }
    }
}

/// Running minimum of margins for one inequality.
pub(crate) struct MarginTracker {
    name: String,
    worst: f64,
    /// Smallest `margin + tolerance`; negative means failure.
    worst_pass_slack: f64,
    witness: Vec<Vec<f64>>,
}

impl MarginTracker {
    pub(crate) fn observe(&mut self, margin: f64, tolerance: f64, witness: &[&[f64]]) {
        let slack = margin + tolerance;
        if margin < self.worst {
            self.worst = margin;
        }
        if slack < self.worst_pass_slack || margin.is_nan() {
            self.worst_pass_slack = if margin.is_nan() { f64::NEG_INFINITY } else { slack };
            self.witness = witness.iter().map(|w| w.to_vec()).collect();
        }
    }

    pub(crate) fn finish(self) -> InequalityCheck {
        let pass = self.worst_pass_slack >= 0.0;
        InequalityCheck {
            name: self.name,
            pass,
            worst_margin: if self.worst.is_finite() { self.worst } else { 0.0 },
            witness: if pass { Vec::new() } else { self.witness },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub pass: bool,
    pub checks: Vec<InequalityCheck>,
}

impl AssumptionReport {
    pub fn check(&self, name_prefix: &str) -> Option<&InequalityCheck> {
        self.checks.iter().find(|c| c.name.starts_with(name_prefix))
    }

    pub fn failures(&self) -> impl Iterator<Item = &InequalityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Relative slack for floating-point evaluation of exact inequalities.
const ROUNDING: f64 = 1e-12;

/// Samples point pairs in a ball and checks the declared constants:
/// smoothness, dissipativity, the `q`/`q′` noise moments, and the second and
/// third derivative bounds. Violations are reported, never raised.
pub fn verify_assumptions(
    obj: &Objective,
    noise: &GradNoiseModel,
    sample_count: usize,
    radius: f64,
    seed: u64,
) -> Result<AssumptionReport> {
    if sample_count == 0 {
        return Err(Error::Argument("sample_count must be at least 1".into()));
    }
    noise.validate()?;
    let c = &obj.constants;
    let d = obj.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let zero = vec![0.0; d];
    let mut origin = InequalityCheck::tracker("origin bounds");
    let f0 = obj.value(&zero);
    let g0 = norm(&obj.grad_f(&zero)?);
    origin.observe(c.f0_bound - f0.abs(), ROUNDING * (1.0 + c.f0_bound), &[&zero]);
    origin.observe(c.grad0_bound - g0, ROUNDING * (1.0 + c.grad0_bound), &[&zero]);

    let mut nonneg = InequalityCheck::tracker("non-negativity");
    let mut smooth = InequalityCheck::tracker("smoothness");
    let mut dissip = InequalityCheck::tracker("dissipativity");
    let mut hess = InequalityCheck::tracker("Hessian op-norm <= L");
    let mut hess_f = InequalityCheck::tracker("Hessian op-norm <= B1");
    let mut third = InequalityCheck::tracker("third derivative <= B2");

    let mut gx = vec![0.0; d];
    let mut gy = vec![0.0; d];
    for _ in 0..sample_count {
        let x = sample_ball(&mut rng, d, radius);
        let y = sample_ball(&mut rng, d, radius);
        obj.grad_into(&x, &mut gx);
        obj.grad_into(&y, &mut gy);
        let dx: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        let dg: Vec<f64> = gx.iter().zip(&gy).map(|(a, b)| a - b).collect();
        let dist = norm(&dx);

        nonneg.observe(obj.value(&x), 0.0, &[&x]);

        let lhs = norm(&dg);
        let rhs = c.smoothness * dist;
        smooth.observe(rhs - lhs, ROUNDING * (1.0 + rhs), &[&x, &y]);

        let inner = dot(&dx, &dg);
        let bound = c.dissipativity_slope * dot(&dx, &dx) - c.dissipativity_offset;
        dissip.observe(inner - bound, ROUNDING * (1.0 + inner.abs() + bound.abs()), &[&x, &y]);

        let op = sym_op_norm(d, &obj.hessian(&x));
        hess.observe(c.smoothness - op, ROUNDING * (1.0 + op), &[&x]);
        hess_f.observe(c.hessian_bound - op, ROUNDING * (1.0 + op), &[&x]);

        let t = obj.third_derivative_op_norm(&x);
        third.observe(c.third_derivative_bound - t, ROUNDING * (1.0 + t), &[&x]);
    }

    let low = moment_check(
        "noise moment (q)",
        noise,
        d,
        c.noise_order,
        c.noise_moment,
        sample_count,
        &mut rng,
    );
    let high = moment_check(
        "noise moment (q')",
        noise,
        d,
        c.noise_order_high,
        c.noise_moment_high,
        sample_count,
        &mut rng,
    );

    let checks = vec![
        origin.finish(),
        nonneg.finish(),
        smooth.finish(),
        dissip.finish(),
        hess.finish(),
        hess_f.finish(),
        third.finish(),
        low,
        high,
    ];
    Ok(AssumptionReport {
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}

/// Empirical `E|ξ|^q` against `declared^q`; fails only when the sample mean
/// exceeds the bound by more than four standard errors.
fn moment_check(
    name: &str,
    noise: &GradNoiseModel,
    dim: usize,
    order: f64,
    declared: f64,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> InequalityCheck {
    let mut buf = vec![0.0; dim];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        noise.sample_into(rng, &mut buf);
        let v = norm(&buf).powf(order);
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    let se = (var / n).sqrt();
    let bound = declared.powf(order);
    let margin = bound - mean;
    InequalityCheck {
        name: name.to_string(),
        pass: margin + 4.0 * se + ROUNDING * (1.0 + bound) >= 0.0,
        worst_margin: margin,
        witness: Vec::new(),
    }
}

/// JSON block `{"objective": {...}, "noise": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveConfig {
    pub dim: usize,
    #[serde(flatten)]
    pub kind: ObjectiveKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constants: Option<ConstantOverrides>,
}

impl ObjectiveConfig {
    pub fn build(&self, noise: &GradNoiseModel) -> Result<Objective> {
        let obj = Objective::new(self.dim, self.kind, noise)?;
        match &self.constants {
            Some(o) => obj.with_overrides(o),
            None => Ok(obj),
        }
    }
}

/// Centered finite-difference gradient, for checks only.
pub fn finite_difference_grad(obj: &Objective, x: &[f64], h: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            let orig = xp[i];
            xp[i] = orig + h;
            let fp = obj.value(&xp);
            xp[i] = orig - h;
            let fm = obj.value(&xp);
            xp[i] = orig;
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// Distance between two points, re-exported for estimators that need the
/// same arithmetic.
pub fn point_distance(a: &[f64], b: &[f64]) -> f64 {
    euclidean(a, b)
}
