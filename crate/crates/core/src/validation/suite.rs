//! The full acceptance suite as a list of reports.

use std::time::Instant;

use serde::Serialize;

use super::experiments::{check_prop_g_gamma, check_theorem3, run_theorem1, Side};
use super::{ExperimentReport, Tolerances};
use crate::bridge_laws::{first_hit_mass, q_closed, q_integral, scaled_unit_integrand, BridgeSpec};
use crate::error::Result;
use crate::limit_laws::{g_atom, g_cdf, g_tail_truncation, gamma_cdf, intlem_check};
use crate::numerics::{integrate, QuadratureSpec};
use crate::samplers::RngStream;

/// Reports in a fixed order.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub reports: Vec<ExperimentReport>,
}

#[derive(Serialize)]
struct Timing<'a> {
    name: &'a str,
    runtime_seconds: f64,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ExperimentReport> {
        self.reports.iter().filter(|r| !r.passed)
    }

    /// Reports with wall-clock times zeroed, so equal seeds give equal bytes.
    pub fn reports_json(&self) -> String {
        let stable: Vec<ExperimentReport> = self.reports.iter().cloned().map(|r| r.with_runtime(0.0)).collect();
        serde_json::to_string_pretty(&stable).expect("reports serialise") + "\n"
    }

    /// Measured wall-clock time per report.
    pub fn timing_json(&self) -> String {
        let rows: Vec<Timing> = self
            .reports
            .iter()
            .map(|r| Timing {
                name: &r.name,
                runtime_seconds: r.runtime_seconds,
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("timings serialise") + "\n"
    }
}

fn timed<F>(f: F) -> Result<ExperimentReport>
where
    F: FnOnce() -> Result<ExperimentReport>,
{
    let start = Instant::now();
    let report = f()?;
    Ok(report.with_runtime(start.elapsed().as_secs_f64()))
}

/// Largest increase along a sequence that should not increase.
fn worst_increase(xs: &[f64]) -> f64 {
    xs.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
}

/// Runs every check. `seed` drives all random draws.
pub fn run_suite(seed: u64, tol: &Tolerances) -> Result<SuiteOutcome> {
    let det = &tol.deterministic;
    let quad = QuadratureSpec::default();
    let mut reports = Vec::new();

    reports.push(timed(|| {
        let mut worst: f64 = 0.0;
        for &y in &[-2.0, -0.5, 0.5, 2.0] {
            for &t in &[0.5, 1.0, 2.0, 8.0] {
                for &f in &[0.1, 0.5, 0.9] {
                    let u = f * t;
                    worst = worst.max((q_integral(y, t, u, &quad)? - q_closed(y, t, u)?).abs());
                }
            }
        }
        Ok(ExperimentReport::new(
            "formula_crosscheck",
            worst,
            det.formula_crosscheck,
            48,
            seed,
        ))
    })?);

    reports.push(timed(|| {
        let mut rng = RngStream::new(seed, 0);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let t = 0.01 + 100.0 * rng.uniform();
            let u = t * rng.uniform();
            worst = worst.max((q_closed(0.0, t, u)? - u / t).abs());
        }
        Ok(ExperimentReport::new("levy_exact", worst, det.levy_exact, 100, seed))
    })?);

    reports.push(timed(|| {
        let mut worst: f64 = 0.0;
        for &(y, t, z) in &[(1.0, 1.0, 0.0), (-1.0, 1.0, 0.0), (2.0, 1.0, -1.0), (-0.5, 3.0, 2.0)] {
            worst = worst.max((first_hit_mass(&BridgeSpec::new(y, t, z)?, &quad)? - 1.0).abs());
        }
        Ok(ExperimentReport::new(
            "first_hit_normalisation",
            worst,
            det.first_hit_normalisation,
            4,
            seed,
        ))
    })?);

    reports.push(timed(|| {
        let mut largest: f64 = 0.0;
        for &(y, t, z) in &[(1.0, 1.0, 1.0), (-2.0, 1.0, -3.0), (0.5, 2.0, 0.25)] {
            largest = largest.max(first_hit_mass(&BridgeSpec::new(y, t, z)?, &quad)?);
        }
        // passes when every mass stays below 1 - defect
        Ok(ExperimentReport::new(
            "first_hit_defect",
            largest,
            1.0 - det.first_hit_defect,
            3,
            seed,
        ))
    })?);

    reports.push(timed(|| {
        let mut worst: f64 = 0.0;
        for &y in &[-2.0, -0.5, 0.5, 2.0] {
            for &u in &[0.25, 1.0, 4.0] {
                let (lhs, rhs) = intlem_check(y, u)?;
                worst = worst.max((lhs - rhs).abs());
            }
        }
        Ok(ExperimentReport::new(
            "integral_identity",
            worst,
            det.integral_identity,
            12,
            seed,
        ))
    })?);

    reports.push(timed(|| {
        let mut worst: f64 = 0.0;
        for &y in &[-2.0, -0.5, 0.5, 2.0] {
            worst = worst.max(1.0 - g_cdf(y, g_tail_truncation(y)?)?);
        }
        Ok(ExperimentReport::new("g_tail", worst, det.g_tail, 4, seed))
    })?);

    reports.push(timed(|| {
        // The g side is normalised by the integrated density over (0, ∞)
        // rather than the closed-form constant, so the check is not circular.
        let mut worst: f64 = 0.0;
        for &y in &[-2.0, -0.5] {
            let density = |t: f64| if t > 0.0 { scaled_unit_integrand(y, t) } else { 0.0 };
            let total = integrate(density, 0.0, f64::INFINITY, &quad, true)?;
            for k in 0..=100 {
                let u = k as f64 / 100.0;
                let g_side = if u > 0.0 {
                    integrate(density, 0.0, u, &quad, true)? / total
                } else {
                    0.0
                };
                worst = worst.max((2.0 * g_side - gamma_cdf(y, u)?).abs());
            }
        }
        Ok(ExperimentReport::new(
            "g_gamma_identity",
            worst,
            det.g_gamma_identity,
            202,
            seed,
        ))
    })?);

    for &y in &[-1.0, 0.0, 1.0] {
        let p = &tol.prop_g_gamma;
        reports.push(timed(|| check_prop_g_gamma(y, p.n, seed, p.max_abs))?);
    }

    let t1 = &tol.theorem1;
    for &y in &[-1.0, 0.0, 1.0] {
        let start = Instant::now();
        let run = run_theorem1(y, t1.horizon, t1.n, t1.step, seed)?;
        let secs = start.elapsed().as_secs_f64();
        let r = &run.report;
        reports.push(ExperimentReport::new(&r.name, r.statistic, t1.ks, r.n_samples, seed).with_runtime(secs));
        if y == 1.0 {
            let gap = (run.zero_fraction - g_atom(y)).abs();
            reports.push(ExperimentReport::new(
                "theorem1_zero_fraction_y1",
                gap,
                t1.atom,
                r.n_samples,
                seed,
            ));
        }
        if y == 0.0 {
            let target = 2.0 / std::f64::consts::PI / t1.horizon.sqrt();
            let se = (target * (1.0 - target) / run.attempts as f64).sqrt();
            let z = (run.acceptance_rate - target).abs() / se;
            reports.push(ExperimentReport::new(
                "theorem1_acceptance_y0",
                z,
                t1.acceptance_standard_errors,
                run.attempts,
                seed,
            ));
        }
    }

    let t3 = tol.theorem3.max_abs;
    reports.push(timed(|| check_theorem3(Side::Neg, -15.0, seed, t3))?);
    reports.push(timed(|| check_theorem3(Side::Pos, 30.0, seed, t3))?);
    for (side, sign, tag) in [(Side::Neg, -1.0, "neg"), (Side::Pos, 1.0, "pos")] {
        reports.push(timed(|| {
            let stats = [5.0, 10.0, 20.0, 40.0]
                .iter()
                .map(|&a| Ok(check_theorem3(side, sign * a, seed, t3)?.statistic))
                .collect::<Result<Vec<f64>>>()?;
            Ok(ExperimentReport::new(
                format!("theorem3_{tag}_monotone"),
                worst_increase(&stats),
                0.0,
                4,
                seed,
            ))
        })?);
    }

    Ok(SuiteOutcome { reports })
}
