//! Monte Carlo and deterministic experiments.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ks::{ks_one_sample, ks_two_sample};
use super::ExperimentReport;
use crate::error::{domain, Result};
use crate::limit_laws::{exp_half_cdf, g_atom, gamma_cdf, gprime_cdf, inv_chisq_cdf, GDistribution};
use crate::samplers::{conditioned_bm_batch, limit_marginal_batch, limit_summary_batch, LimitSampler};

/// Time at which the pre-limit and limit marginals are compared.
pub const PROBE_TIME: f64 = 2.0;

/// Everything measured by one pre-limit run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem1Run {
    pub report: ExperimentReport,
    pub ks_last_zero: f64,
    pub ks_occupation: f64,
    pub ks_marginal: f64,
    /// Fraction of accepted paths with no zero before the horizon.
    pub zero_fraction: f64,
    pub attempts: u64,
    pub acceptance_rate: f64,
}

/// Conditioned Brownian paths on `[0, horizon]` against the limit process:
/// last zero, occupation and the position at time 2.
pub fn run_theorem1(y: f64, horizon: f64, n: usize, step: f64, seed: u64) -> Result<Theorem1Run> {
    if !(horizon >= 10.0) {
        return domain(format!("pre-limit check needs horizon >= 10, got {horizon}"));
    }
    if n == 0 {
        return domain("need at least one draw");
    }
    let summaries = conditioned_bm_batch(y, horizon, step, PROBE_TIME, n, seed)?;
    let sampler = LimitSampler::new(y)?;
    let law = sampler.last_zero_law();
    let atom = g_atom(y);

    let last_zeros: Vec<f64> = summaries.iter().map(|s| s.last_zero).collect();
    let occupations: Vec<f64> = summaries.iter().map(|s| s.occupation).collect();
    let probes: Vec<f64> = summaries.iter().map(|s| s.probe_value).collect();

    let ks_last_zero = ks_one_sample(&last_zeros, |x| law.cdf(x), atom)?;
    let ks_occupation = ks_one_sample(&occupations, |u| gamma_cdf(y, u.min(1.0)), atom)?;
    let limit_probes = limit_marginal_batch(&sampler, PROBE_TIME, step, n, seed)?;
    let ks_marginal = ks_two_sample(&probes, &limit_probes)?;

    let attempts = n as u64 + summaries.iter().map(|s| s.n_rejected).sum::<u64>();
    let zero_fraction = last_zeros.iter().filter(|&&z| z == 0.0).count() as f64 / n as f64;
    let statistic = ks_last_zero.max(ks_occupation).max(ks_marginal);
    Ok(Theorem1Run {
        report: ExperimentReport::new(format!("theorem1_y{y}"), statistic, f64::INFINITY, n as u64, seed),
        ks_last_zero,
        ks_occupation,
        ks_marginal,
        zero_fraction,
        attempts,
        acceptance_rate: n as f64 / attempts as f64,
    })
}

/// [`run_theorem1`] reduced to its report, judged against `tolerance`.
pub fn check_theorem1(
    y: f64,
    horizon: f64,
    n: usize,
    step: f64,
    seed: u64,
    tolerance: f64,
) -> Result<ExperimentReport> {
    let run = run_theorem1(y, horizon, n, step, seed)?;
    let r = run.report;
    Ok(ExperimentReport::new(r.name, r.statistic, tolerance, r.n_samples, seed))
}

/// Largest gap over `u ∈ [0, 1]` between `2 P(g ∈ (0, u])` and
/// `P(τ + Γ ≤ u)`, both estimated from the same `n` limit-process draws.
pub fn check_prop_g_gamma(y: f64, n: usize, seed: u64, tolerance: f64) -> Result<ExperimentReport> {
    if n < 1000 {
        return domain(format!("need at least 1000 draws, got {n}"));
    }
    let sampler = LimitSampler::new(y)?;
    let draws = limit_summary_batch(&sampler, n, seed)?;
    // Both sides are step functions of u; sweep their jumps in order.
    let mut events: Vec<(f64, i64)> = Vec::with_capacity(2 * n);
    for d in &draws {
        if d.g > 0.0 && d.g <= 1.0 {
            events.push((d.g, 2));
        }
        let entry = d.tau + d.gamma;
        if entry <= 1.0 {
            events.push((entry, -1));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut level = 0i64;
    let mut worst = 0i64;
    for (i, &(u, w)) in events.iter().enumerate() {
        level += w;
        if events.get(i + 1).is_none_or(|next| next.0 != u) {
            worst = worst.max(level.abs());
        }
    }
    let statistic = worst as f64 / n as f64;
    Ok(ExperimentReport::new(
        format!("prop_g_gamma_y{y}"),
        statistic,
        tolerance,
        n as u64,
        seed,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Pos,
    Neg,
}

/// Deviations from the far-start limits at `|y|` on the given side:
/// for `Pos`, `[sup |P(g ≤ s y² | g > 0) − P(1/N² ≤ s)|]`; for `Neg`,
/// `[occupation deviation, last-zero deviation]` for `y²(1 − Γ)` against
/// the rate-1/2 exponential and `y²(1 − g)` against its limit law.
pub fn theorem3_statistics(side: Side, y_abs: f64) -> Result<Vec<f64>> {
    if !(y_abs >= 5.0 && y_abs.is_finite()) {
        return domain(format!("far-start check needs |y| >= 5, got {y_abs}"));
    }
    let y2 = y_abs * y_abs;
    match side {
        Side::Pos => {
            let law = GDistribution::new(y_abs)?;
            let atom = law.atom();
            let grid: Vec<f64> = (0..=80).map(|k| 10f64.powf(-2.0 + k as f64 / 20.0)).collect();
            let dev = grid
                .par_iter()
                .map(|&s| Ok(((law.cdf(s * y2)? - atom) / (1.0 - atom) - inv_chisq_cdf(s)).abs()))
                .collect::<Result<Vec<f64>>>()?;
            Ok(vec![dev.into_iter().fold(0.0, f64::max)])
        }
        Side::Neg => {
            let y = -y_abs;
            let occ = (0..=200)
                .into_par_iter()
                .map(|k| {
                    let u = k as f64 * 0.1;
                    Ok((1.0 - gamma_cdf(y, 1.0 - u / y2)? - exp_half_cdf(u)).abs())
                })
                .collect::<Result<Vec<f64>>>()?;
            let law = GDistribution::new(y)?;
            let last = (0..=200)
                .into_par_iter()
                .map(|k| {
                    let u = -20.0 + k as f64 * 0.2;
                    Ok((1.0 - law.cdf(1.0 - u / y2)? - gprime_cdf(u)?).abs())
                })
                .collect::<Result<Vec<f64>>>()?;
            Ok(vec![
                occ.into_iter().fold(0.0, f64::max),
                last.into_iter().fold(0.0, f64::max),
            ])
        }
    }
}

/// Deterministic far-start check; the statistic is the largest deviation.
pub fn check_theorem3(side: Side, y: f64, seed: u64, tolerance: f64) -> Result<ExperimentReport> {
    let stats = theorem3_statistics(side, y.abs())?;
    let statistic = stats.into_iter().fold(0.0, f64::max);
    let tag = match side {
        Side::Pos => "pos",
        Side::Neg => "neg",
    };
    Ok(ExperimentReport::new(
        format!("theorem3_{tag}_y{y}"),
        statistic,
        tolerance,
        0,
        seed,
    ))
}
