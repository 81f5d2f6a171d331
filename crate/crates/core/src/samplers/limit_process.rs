//! Exact sampler for the limit process.
//!
//! Given its last zero `x`, the limit process is a Brownian bridge from `y`
//! to 0 over `[0, x]` conditioned on spending at most one time unit below
//! zero, followed by a Bessel(3) process from 0. Rather than rejecting whole
//! bridge paths, the bridge is split at its first zero `τ'`: the time after
//! it spent below zero, `A`, is uniform on `[0, x − τ']` and independent of
//! `τ'`, so conditioning on the occupation only reweights the pair
//! `(τ', A)`, which is sampled exactly. Paths are then filled in given
//! `(τ', A)`: a Bessel(3) bridge before `τ'` and a cyclically shifted
//! discrete bridge with the prescribed occupation after it.

use serde::Serialize;

use super::brownian::{bridge_values, grid_size, norm, sample_bessel3};
use super::path::GridPath;
use super::rng::RngStream;
use crate::error::{domain, Result};
use crate::limit_laws::GDistribution;
use crate::numerics::{erf, erfc, upper_gamma_neg_half, FRAC_1_SQRT_PI};

/// Largest number of skeleton points used for the bridge after its first zero.
const MAX_EXCURSION_POINTS: usize = 1 << 20;

/// One draw of the limit process.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitDraw {
    pub path: GridPath,
    #[serde(flatten)]
    pub summary: LimitSummary,
}

/// Scalar functionals of one draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitSummary {
    /// Last zero.
    pub g: f64,
    /// First entrance time into `(−∞, 0]`: 0 when starting at or below zero,
    /// `+∞` when the path never gets there (serialised as `null`).
    #[serde(serialize_with = "finite_or_null")]
    pub tau: f64,
    /// Time spent below zero, all of it before `g`.
    pub gamma: f64,
    /// First zero of the bridge part, `+∞` when `g = 0`.
    #[serde(skip)]
    pub(crate) first_zero: f64,
    /// Time below zero after the first zero.
    #[serde(skip)]
    pub(crate) excursion_occupation: f64,
}

fn finite_or_null<S: serde::Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

/// Sampler for one starting point, keeping the tabulated law of `g`.
#[derive(Debug, Clone)]
pub struct LimitSampler {
    law: GDistribution,
}

impl LimitSampler {
    pub fn new(y: f64) -> Result<Self> {
        Ok(Self {
            law: GDistribution::new(y)?,
        })
    }

    pub fn y(&self) -> f64 {
        self.law.y()
    }

    pub fn last_zero_law(&self) -> &GDistribution {
        &self.law
    }

    /// Draws `g` by inversion, then the bridge skeleton given `g`.
    pub fn sample_summary(&self, rng: &mut RngStream) -> Result<LimitSummary> {
        let mut p = rng.uniform();
        while p == 0.0 {
            p = rng.uniform();
        }
        let g = self.law.quantile(p)?;
        Ok(bridge_skeleton(self.y(), g, rng))
    }

    /// A full path on `[0, horizon]` together with its functionals.
    pub fn sample(&self, horizon: f64, step: f64, rng: &mut RngStream) -> Result<LimitDraw> {
        if !(horizon > 0.0) {
            return domain(format!("horizon must be positive, got {horizon}"));
        }
        let (n, h) = grid_size(horizon, step)?;
        let summary = self.sample_summary(rng)?;
        let y = self.y();
        if summary.g == 0.0 {
            let path = sample_bessel3(y, horizon, h, rng)?;
            return Ok(LimitDraw { path, summary });
        }
        let values = fill_path(y, &summary, n, h, rng);
        Ok(LimitDraw {
            path: GridPath::new(h, values, 0.0)?,
            summary,
        })
    }
}

/// One draw of the limit process from `y` on `[0, horizon]`.
pub fn sample_x(y: f64, horizon: f64, step: f64, rng: &mut RngStream) -> Result<LimitDraw> {
    LimitSampler::new(y)?.sample(horizon, step, rng)
}

/// Mixture weights for the first zero of the conditioned bridge with
/// `y > 0`, `x > 1`, in units where they sum to `q(x, 1)`.
pub(crate) fn positive_side_weights(y: f64, x: f64) -> [f64; 3] {
    let lambda = 0.5 * y * y;
    let v0 = 1.0 / (x * (x - 1.0));
    let c = lambda * v0;
    [
        erf(c.sqrt()),
        erfc(c.sqrt()) / x,
        lambda * upper_gamma_neg_half(c) * FRAC_1_SQRT_PI / (x * x),
    ]
}

/// First zero `τ'` and post-zero occupation `A` of the bridge from `y` to 0
/// over `[0, x]` conditioned on total occupation at most 1.
///
/// Writing `τ' = 1/(1/x + v)`, the free bridge has `v = N²/y²`.
fn bridge_skeleton(y: f64, x: f64, rng: &mut RngStream) -> LimitSummary {
    if x == 0.0 {
        return LimitSummary {
            g: 0.0,
            tau: f64::INFINITY,
            gamma: 0.0,
            first_zero: f64::INFINITY,
            excursion_occupation: 0.0,
        };
    }
    let lambda = 0.5 * y * y;
    let from_v = |v: f64| x / (1.0 + v * x);
    let (first_zero, occ) = if y == 0.0 {
        (0.0, rng.uniform() * x.min(1.0))
    } else if x <= 1.0 {
        let n = rng.normal();
        let tz = x * y * y / (y * y + x * n * n);
        (tz, rng.uniform() * (x - tz))
    } else if y > 0.0 {
        // Weight of v: 1 up to v0 (remaining length ≤ 1), else 1/(x − τ').
        let [w1, w2, w3] = positive_side_weights(y, x);
        let c = lambda / (x * (x - 1.0));
        let pick = rng.uniform() * (w1 + w2 + w3);
        let v = if pick < w1 {
            let n = abs_normal_below(c.sqrt() * std::f64::consts::SQRT_2, rng);
            n * n / (2.0 * lambda)
        } else if pick < w1 + w2 {
            let n = abs_normal_above(c.sqrt() * std::f64::consts::SQRT_2, rng);
            n * n / (2.0 * lambda)
        } else {
            gamma_neg_half_tail(c, rng) / lambda
        };
        let tz = from_v(v);
        (tz, rng.uniform() * (x - tz).min(1.0))
    } else {
        // Need τ' + A ≤ 1: τ' ≤ 1 and A ≤ 1 − τ', i.e. v ≥ v1 with weight 1 − v1/v.
        let v1 = 1.0 - 1.0 / x;
        let v = if lambda * v1 <= 2.0 {
            loop {
                let n = abs_normal_above(y.abs() * v1.sqrt(), rng);
                let v = n * n / (2.0 * lambda);
                if rng.uniform() * v < v - v1 {
                    break v;
                }
            }
        } else {
            loop {
                let v = v1 + (rng.exp1() + rng.exp1()) / lambda;
                if rng.uniform() < (v1 / v).powf(1.5) {
                    break v;
                }
            }
        };
        let tz = from_v(v).min(1.0);
        (tz, rng.uniform() * (1.0 - tz))
    };
    let (tau, gamma) = if y <= 0.0 {
        (0.0, first_zero + occ)
    } else {
        (first_zero, occ)
    };
    LimitSummary {
        g: x,
        tau,
        gamma,
        first_zero,
        excursion_occupation: occ,
    }
}

/// `|N|` conditioned on `|N| ≥ a`.
fn abs_normal_above(a: f64, rng: &mut RngStream) -> f64 {
    if a < 1.0 {
        loop {
            let n = rng.normal().abs();
            if n >= a {
                return n;
            }
        }
    }
    loop {
        let z = a + rng.exp1() / a;
        if rng.uniform() < (-0.5 * (z - a) * (z - a)).exp() {
            return z;
        }
    }
}

/// `|N|` conditioned on `|N| ≤ a`.
fn abs_normal_below(a: f64, rng: &mut RngStream) -> f64 {
    if a >= 1.0 {
        loop {
            let n = rng.normal().abs();
            if n <= a {
                return n;
            }
        }
    }
    loop {
        let z = a * rng.uniform();
        if rng.uniform() < (-0.5 * z * z).exp() {
            return z;
        }
    }
}

/// Density proportional to `r^(-3/2) e^(-r)` on `(c, ∞)`.
fn gamma_neg_half_tail(c: f64, rng: &mut RngStream) -> f64 {
    if c >= 1.0 {
        loop {
            let r = c + rng.exp1();
            if rng.uniform() < (c / r).powf(1.5) {
                return r;
            }
        }
    }
    loop {
        let u = rng.uniform_pos();
        let r = c / (u * u);
        if rng.uniform() < (c - r).exp() {
            return r;
        }
    }
}

/// Grid values of a path with `g > 0`.
fn fill_path(y: f64, s: &LimitSummary, n: usize, h: f64, rng: &mut RngStream) -> Vec<f64> {
    let tz = s.first_zero;
    let g = s.g;
    let horizon = n as f64 * h;
    let mut values = Vec::with_capacity(n + 1);
    values.push(y);

    // Before the first zero: |y| times sign, a Bessel(3) bridge to 0.
    let sign = if y < 0.0 { -1.0 } else { 1.0 };
    let mut pos = [y.abs(), 0.0, 0.0];
    let mut t_prev = 0.0;
    let mut k = 1;
    while k <= n && (k as f64) * h < tz {
        let t = k as f64 * h;
        let frac = (t - t_prev) / (tz - t_prev);
        let sd = ((t - t_prev) * (tz - t) / (tz - t_prev)).sqrt();
        for c in &mut pos {
            *c += -frac * *c + sd * rng.normal();
        }
        values.push(sign * norm(&pos));
        t_prev = t;
        k += 1;
    }

    // Between the first and last zero.
    if k <= n && (k as f64) * h < g {
        let (times, anchors) = excursion_skeleton(tz, g - tz, s.excursion_occupation, h, rng);
        let mut j = 1;
        let (mut lt, mut lv) = (tz, 0.0);
        while k <= n && (k as f64) * h < g {
            let t = k as f64 * h;
            while times[j] <= t {
                lt = times[j];
                lv = anchors[j];
                j += 1;
            }
            let (rt, rv) = (times[j], anchors[j]);
            let frac = (t - lt) / (rt - lt);
            let sd = ((t - lt) * (rt - t) / (rt - lt)).sqrt();
            let v = lv + frac * (rv - lv) + sd * rng.normal();
            values.push(v);
            lt = t;
            lv = v;
            k += 1;
        }
    }

    // After the last zero: Bessel(3) from 0.
    let mut pos = [0.0; 3];
    let mut t_prev = g;
    while k <= n {
        let t = (k as f64 * h).min(horizon);
        let sd = (t - t_prev).sqrt();
        for c in &mut pos {
            *c += sd * rng.normal();
        }
        values.push(norm(&pos));
        t_prev = t;
        k += 1;
    }
    values
}

/// Times and values of a discrete bridge from 0 to 0 over
/// `[start, start + len]` whose fraction of points below zero matches
/// `occupation / len`. Built by cyclically shifting a free discrete bridge
/// so that it starts at the point of the required rank.
fn excursion_skeleton(start: f64, len: f64, occupation: f64, step: f64, rng: &mut RngStream) -> (Vec<f64>, Vec<f64>) {
    let m = ((len / step).round() as usize).clamp(1, MAX_EXCURSION_POINTS);
    let dt = len / m as f64;
    let bridge = bridge_values(0.0, 0.0, m, dt, rng);
    let rank = ((occupation / len * m as f64).floor() as usize).min(m - 1);
    let mut order: Vec<usize> = (0..m).collect();
    order.select_nth_unstable_by(rank, |&a, &b| bridge[a].total_cmp(&bridge[b]));
    let pivot = order[rank];
    let base = bridge[pivot];
    let values: Vec<f64> = (0..=m).map(|j| bridge[(pivot + j) % m] - base).collect();
    let mut times: Vec<f64> = (0..=m).map(|j| start + j as f64 * dt).collect();
    times[m] = start + len;
    (times, values)
}
