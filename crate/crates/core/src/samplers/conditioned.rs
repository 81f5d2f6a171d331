//! Whole-path rejection samplers for paths allowed limited time below zero.

use super::brownian::{bridge_values, grid_size};
use super::path::{occupation_below_zero, GridPath, PathTally};
use super::rng::RngStream;
use crate::error::{domain, Error, Result};

pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

/// An accepted path with the number of discarded attempts before it.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditioned {
    pub path: GridPath,
    pub n_rejected: u64,
}

/// Functionals of an accepted conditioned Brownian path, without the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionedSummary {
    /// Last zero before the horizon.
    pub last_zero: f64,
    /// Time spent below zero up to the horizon.
    pub occupation: f64,
    /// Interpolated position at the probe time.
    pub probe_value: f64,
    pub n_rejected: u64,
}

/// Brownian motion from `y` on `[0, horizon]` conditioned on spending at most
/// `budget` below zero.
pub fn sample_conditioned_bm(
    y: f64,
    horizon: f64,
    step: f64,
    budget: f64,
    rng: &mut RngStream,
    max_attempts: u64,
) -> Result<Conditioned> {
    let (summary, values, h) = conditioned_bm(y, horizon, step, budget, 0.0, rng, max_attempts, true)?;
    Ok(Conditioned {
        path: GridPath::new(h, values, 0.0)?,
        n_rejected: summary.n_rejected,
    })
}

/// Same law as [`sample_conditioned_bm`], reporting only the last zero, the
/// occupation and the position at `probe_time`. Uses the same random draws,
/// so the two agree on a shared stream.
pub fn conditioned_bm_summary(
    y: f64,
    horizon: f64,
    step: f64,
    budget: f64,
    probe_time: f64,
    rng: &mut RngStream,
    max_attempts: u64,
) -> Result<ConditionedSummary> {
    if !(0.0..=horizon).contains(&probe_time) {
        return domain(format!("probe time {probe_time} outside [0, {horizon}]"));
    }
    conditioned_bm(y, horizon, step, budget, probe_time, rng, max_attempts, false).map(|r| r.0)
}

#[allow(clippy::too_many_arguments)]
fn conditioned_bm(
    y: f64,
    horizon: f64,
    step: f64,
    budget: f64,
    probe_time: f64,
    rng: &mut RngStream,
    max_attempts: u64,
    keep_path: bool,
) -> Result<(ConditionedSummary, Vec<f64>, f64)> {
    if !y.is_finite() {
        return domain("start must be finite");
    }
    if !(budget > 0.0 && horizon > budget) {
        return domain(format!(
            "need horizon > budget > 0, got horizon {horizon}, budget {budget}"
        ));
    }
    let (n, h) = grid_size(horizon, step)?;
    let sd = h.sqrt();
    let mut values = Vec::new();
    for attempt in 0..max_attempts {
        values.clear();
        if keep_path {
            values.push(y);
        }
        let mut tally = PathTally::start(y);
        let mut probe_value = if probe_time == 0.0 { Some(y) } else { None };
        let mut accepted = true;
        for _ in 0..n {
            let prev = tally.value;
            let next = prev + sd * rng.normal();
            let t0 = tally.time;
            tally.push(next, h);
            if probe_value.is_none() && tally.time >= probe_time {
                probe_value = Some(prev + (probe_time - t0) / h * (next - prev));
            }
            if keep_path {
                values.push(next);
            }
            // Occupation only grows, so a path over budget can be dropped early.
            if tally.below > budget {
                accepted = false;
                break;
            }
        }
        if accepted {
            let summary = ConditionedSummary {
                last_zero: tally.last_zero,
                occupation: tally.below,
                probe_value: probe_value.unwrap_or(tally.value),
                n_rejected: attempt,
            };
            return Ok((summary, values, h));
        }
    }
    Err(Error::RejectionBudgetExceeded { attempts: max_attempts })
}

/// Brownian bridge from `y` to 0 over `[0, x]` conditioned on spending at
/// most one time unit below zero.
pub fn sample_conditioned_bridge(
    y: f64,
    x: f64,
    step: f64,
    rng: &mut RngStream,
    max_attempts: u64,
) -> Result<Conditioned> {
    if !y.is_finite() {
        return domain("start must be finite");
    }
    let (n, h) = grid_size(x, step.min(x))?;
    for attempt in 0..max_attempts {
        let path = GridPath::new(h, bridge_values(y, 0.0, n, h, rng), 0.0)?;
        if x <= 1.0 || occupation_below_zero(&path, x)? <= 1.0 {
            return Ok(Conditioned {
                path,
                n_rejected: attempt,
            });
        }
    }
    Err(Error::RejectionBudgetExceeded { attempts: max_attempts })
}
