//! Seeded noise streams driving every stepper.
//!
//! A stream is identified by `(seed, stream)`; each trajectory of an ensemble
//! gets its own stream index, so trajectories are independent and can be
//! evolved in any order. Within one step the draw order is fixed: the `N`
//! mini-batch noise vectors first, then the Gaussian increment.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::objective::{GradNoise, GradNoiseModel};

/// How the per-step Gaussian increment is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseMode {
    /// `ζ ~ N(0, I)` is primary; the Brownian increment is `√η ζ`.
    IndependentNormals,
    /// The Brownian increment `ΔB ~ N(0, η I)` is primary and
    /// `ζ = ΔB / √η`.
    #[default]
    BrownianDerived,
}

/// Draws consumed by one SGDm / intermediate step.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepDraws {
    pub batch: Vec<GradNoise>,
    pub zeta: Vec<f64>,
    pub brownian: Vec<f64>,
}

impl StepDraws {
    pub fn zeros(dim: usize, batch: usize) -> Self {
        Self {
            batch: vec![vec![0.0; dim]; batch],
            zeta: vec![0.0; dim],
            brownian: vec![0.0; dim],
        }
    }
}

/// Mixes a seed with a tag so that related ensembles (reference, floor,
/// calibration) use unrelated streams.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct NoiseStream {
    seed: u64,
    stream: u64,
    mode: NoiseMode,
    cursor: usize,
    rng: ChaCha8Rng,
}

impl NoiseStream {
    pub fn new(seed: u64, stream: u64, mode: NoiseMode) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self {
            seed,
            stream,
            mode,
            cursor: 0,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn mode(&self) -> NoiseMode {
        self.mode
    }

    /// Number of steps (or Brownian increments) consumed so far.
    pub fn cursor(&self) -> usize {
        self.cursor
    }

    /// A fresh copy positioned at the start of the same stream.
    pub fn replay(&self) -> Self {
        Self::new(self.seed, self.stream, self.mode)
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    pub fn fill_standard_normals(&mut self, out: &mut [f64]) {
        for v in out.iter_mut() {
            *v = StandardNormal.sample(&mut self.rng);
        }
    }

    /// Draws for one step of size `eta`, reusing the buffers in `draws`.
    pub fn fill_step(&mut self, model: &GradNoiseModel, eta: f64, draws: &mut StepDraws) {
        for b in draws.batch.iter_mut() {
            model.sample_into(&mut self.rng, b);
        }
        let sqrt_eta = eta.sqrt();
        match self.mode {
            NoiseMode::IndependentNormals => {
                for (z, db) in draws.zeta.iter_mut().zip(draws.brownian.iter_mut()) {
                    *z = StandardNormal.sample(&mut self.rng);
                    *db = sqrt_eta * *z;
                }
            }
            NoiseMode::BrownianDerived => {
                for (z, db) in draws.zeta.iter_mut().zip(draws.brownian.iter_mut()) {
                    let g: f64 = StandardNormal.sample(&mut self.rng);
                    *db = sqrt_eta * g;
                    *z = *db / sqrt_eta;
                }
            }
        }
        self.cursor += 1;
    }

    pub fn next_step(
        &mut self,
        model: &GradNoiseModel,
        batch: usize,
        dim: usize,
        eta: f64,
    ) -> StepDraws {
        let mut d = StepDraws::zeros(dim, batch);
        self.fill_step(model, eta, &mut d);
        d
    }

    /// A Brownian increment over a time `dt`, for the diffusion steppers.
    pub fn fill_brownian(&mut self, dt: f64, out: &mut [f64]) {
        let s = dt.sqrt();
        for v in out.iter_mut() {
            let g: f64 = StandardNormal.sample(&mut self.rng);
            *v = s * g;
        }
        self.cursor += 1;
    }

    pub fn next_brownian(&mut self, dim: usize, dt: f64) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        self.fill_brownian(dt, &mut out);
        out
    }
}
