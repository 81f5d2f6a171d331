//! Seeded path samplers, path functionals and the rejection and exact
//! samplers for the conditioned process and its limit.

mod brownian;
mod conditioned;
mod limit_process;
mod path;
mod rng;

use rayon::prelude::*;
use serde::Serialize;

pub use brownian::{sample_bessel3, sample_bm, sample_bridge};
pub use conditioned::{
    conditioned_bm_summary, sample_conditioned_bm, sample_conditioned_bridge, Conditioned, ConditionedSummary,
    DEFAULT_MAX_ATTEMPTS,
};
pub use limit_process::{sample_x, LimitDraw, LimitSampler, LimitSummary};
pub use path::{last_zero, occupation_below_zero, GridPath};
pub use rng::RngStream;

use crate::error::{Error, Result};

/// Scalar draws with their provenance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleBatch {
    pub label: String,
    pub draws: Vec<f64>,
    pub seed: u64,
    pub n_rejected: u64,
}

impl SampleBatch {
    pub fn new(label: impl Into<String>, draws: Vec<f64>, seed: u64, n_rejected: u64) -> Result<Self> {
        if draws.is_empty() {
            return Err(Error::EmptyBatch);
        }
        if let Some(bad) = draws.iter().find(|d| !d.is_finite()) {
            return Err(Error::Domain(format!("batch draws must be finite, found {bad}")));
        }
        Ok(Self {
            label: label.into(),
            draws,
            seed,
            n_rejected,
        })
    }

    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }
}

/// Stream ids used by the limit-process draws, kept apart from those of
/// the conditioned Brownian draws so both can share a seed.
pub const LIMIT_STREAM_OFFSET: u64 = 1 << 32;

/// `n` conditioned Brownian summaries, draw `i` on stream `i`.
pub fn conditioned_bm_batch(
    y: f64,
    horizon: f64,
    step: f64,
    probe_time: f64,
    n: usize,
    seed: u64,
) -> Result<Vec<ConditionedSummary>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::new(seed, i);
            conditioned_bm_summary(y, horizon, step, 1.0, probe_time, &mut rng, DEFAULT_MAX_ATTEMPTS)
        })
        .collect()
}

/// `n` limit-process summaries, draw `i` on stream `LIMIT_STREAM_OFFSET + i`.
pub fn limit_summary_batch(sampler: &LimitSampler, n: usize, seed: u64) -> Result<Vec<LimitSummary>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| sampler.sample_summary(&mut RngStream::new(seed, LIMIT_STREAM_OFFSET + i)))
        .collect()
}

/// Position of the limit process at `time` for `n` draws, sampled on a grid
/// of spacing `step`.
pub fn limit_marginal_batch(sampler: &LimitSampler, time: f64, step: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let draw = sampler.sample(time, step, &mut RngStream::new(seed, LIMIT_STREAM_OFFSET + i))?;
            Ok(draw.path.last())
        })
        .collect()
}
