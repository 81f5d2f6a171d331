//! Kolmogorov-Smirnov machinery and the experiments that check the laws
//! and samplers against each other.

mod experiments;
mod ks;
mod suite;

use serde::{Deserialize, Serialize};

pub use experiments::PROBE_TIME;
pub use experiments::{
    check_prop_g_gamma, check_theorem1, check_theorem3, run_theorem1, theorem3_statistics, Side, Theorem1Run,
};
pub use ks::{ecdf, ecdf_of, ks_distance, ks_one_sample, ks_two_sample};
pub use suite::{run_suite, SuiteOutcome};

/// Outcome of one check. `passed` is `statistic <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub statistic: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub n_samples: u64,
    pub runtime_seconds: f64,
    pub seed: u64,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>, statistic: f64, tolerance: f64, n_samples: u64, seed: u64) -> Self {
        Self {
            name: name.into(),
            statistic,
            tolerance,
            // NaN never passes
            passed: statistic <= tolerance,
            n_samples,
            runtime_seconds: 0.0,
            seed,
        }
    }

    pub fn with_runtime(mut self, seconds: f64) -> Self {
        self.runtime_seconds = seconds;
        self
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct Tolerances {
    pub calibration_seed: u64,
    pub deterministic: DeterministicTolerances,
    pub prop_g_gamma: PropTolerances,
    pub theorem1: Theorem1Tolerances,
    pub theorem3: Theorem3Tolerances,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DeterministicTolerances {
    pub formula_crosscheck: f64,
    pub levy_exact: f64,
    pub first_hit_normalisation: f64,
    pub first_hit_defect: f64,
    pub integral_identity: f64,
    pub g_tail: f64,
    pub g_gamma_identity: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PropTolerances {
    pub max_abs: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Theorem1Tolerances {
    pub ks: f64,
    pub atom: f64,
    pub acceptance_standard_errors: f64,
    pub horizon: f64,
    pub n: usize,
    pub step: f64,
    pub probe_time: f64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Theorem3Tolerances {
    pub max_abs: f64,
}

const TOLERANCES: &str = include_str!("tolerances.toml");

impl Tolerances {
    /// The frozen tolerances shipped with the crate.
    pub fn frozen() -> Self {
        toml::from_str(TOLERANCES).expect("embedded tolerances parse")
    }
}
