//! Laws of a Brownian bridge started at `y`: the first-hit time of zero and
//! the distribution `q(y, t, u)` of the time spent below zero.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{domain, Result};
use crate::numerics::{erf, erfcx, integrate, std_normal_cdf, QuadratureSpec};

/// Bridge of length `t` from `y` to `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeSpec {
    y: f64,
    t: f64,
    z: f64,
}

impl BridgeSpec {
    pub fn new(y: f64, t: f64, z: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return domain(format!("bridge length must be positive and finite, got {t}"));
        }
        if !y.is_finite() || !z.is_finite() {
            return domain("bridge endpoints must be finite");
        }
        Ok(Self { y, t, z })
    }

    /// Bridge from `y` to zero.
    pub fn to_zero(y: f64, t: f64) -> Result<Self> {
        Self::new(y, t, 0.0)
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn z(&self) -> f64 {
        self.z
    }
}

/// Density at `s` of the first time the bridge hits zero.
pub fn first_hit_density(spec: &BridgeSpec, s: f64) -> Result<f64> {
    let BridgeSpec { y, t, z } = *spec;
    if y == 0.0 {
        return domain("first-hit density needs a nonzero start");
    }
    if !(s > 0.0 && s < t) {
        return domain(format!("time {s} outside (0, {t})"));
    }
    let exponent = (y - z).powi(2) / (2.0 * t) - z * z / (2.0 * (t - s)) - y * y / (2.0 * s);
    Ok(y.abs() * t.sqrt() / (2.0 * PI * s.powi(3) * (t - s)).sqrt() * exponent.exp())
}

/// Total mass of [`first_hit_density`] over `(0, t)`; one exactly when the
/// endpoints are on opposite sides of zero (or the end is zero).
pub fn first_hit_mass(spec: &BridgeSpec, quad: &QuadratureSpec) -> Result<f64> {
    let t = spec.t;
    let density = |s: f64| {
        if s <= 0.0 || s >= t {
            0.0
        } else {
            first_hit_density(spec, s).unwrap_or(0.0)
        }
    };
    let half = 0.5 * t;
    let head = integrate(density, 0.0, half, quad, false)?;
    // (t - s)^(-1/2) blow-up at the right end when z = 0
    let tail = integrate(|r: f64| density(t - r), 0.0, half, quad, true)?;
    Ok(head + tail)
}

fn check_occupation_args(t: f64, u: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("bridge length must be positive and finite, got {t}"));
    }
    if !(u >= 0.0) || u >= t {
        return domain(format!("occupation level {u} outside [0, {t})"));
    }
    Ok(())
}

/// `q` by direct quadrature over the first-hit time. Slow; kept as an
/// independent evaluation of the same law.
pub fn q_integral(y: f64, t: f64, u: f64, quad: &QuadratureSpec) -> Result<f64> {
    check_occupation_args(t, u)?;
    if y == 0.0 {
        return Ok(u / t);
    }
    let y2 = y * y;
    // x^(-3/2) e^(y²/2t - y²/2x) / sqrt(2π), with the x → 0 limit taken as 0
    let kernel = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        (-(y2 * (t - x)) / (2.0 * t * x)).exp() / (2.0 * PI * x.powi(3)).sqrt()
    };
    let ya = y.abs();
    let st = t.sqrt();
    if y < 0.0 {
        if u == 0.0 {
            return Ok(0.0);
        }
        let f = |x: f64| {
            if x >= t {
                return 0.0;
            }
            st * (u - x) * ya * kernel(x) / (t - x).powf(1.5)
        };
        return Ok(integrate(f, 0.0, u, quad, false)?.clamp(0.0, 1.0));
    }
    let split = t - u;
    let first = integrate(
        |x: f64| st * u * ya * kernel(x) / (t - x).powf(1.5),
        0.0,
        split,
        quad,
        false,
    )?;
    let second = if u > 0.0 {
        // r = t - x; the (t - x)^(-1/2) factor becomes an r^(-1/2) endpoint singularity.
        integrate(
            |r: f64| {
                if r <= 0.0 {
                    return 0.0;
                }
                st * ya * kernel(t - r) / r.sqrt()
            },
            0.0,
            u,
            quad,
            true,
        )?
    } else {
        0.0
    };
    Ok((first + second).clamp(0.0, 1.0))
}

/// Bracket `B` with `q = exp(-y²(t-u)/(2tu)) * B` for `y < 0`. Written with
/// `erfcx` so that `B` stays representable when the prefactor underflows.
pub(crate) fn q_neg_bracket(y: f64, t: f64, u: f64) -> f64 {
    let ya = y.abs();
    let w = ya * ((t - u) / (2.0 * t * u)).sqrt();
    let coef = u / t + y * y * (t - u) / (t * t);
    let tail = (2.0 * u * (t - u) / (PI * t.powi(3))).sqrt() * ya;
    (coef * erfcx(w) - tail).max(0.0)
}

/// `q` from the normal-CDF closed form, valid for every real `y`.
pub fn q_closed(y: f64, t: f64, u: f64) -> Result<f64> {
    check_occupation_args(t, u)?;
    if u == 0.0 {
        return Ok(0.0);
    }
    if y < 0.0 {
        let decay = y * y * (t - u) / (2.0 * t * u);
        return Ok((q_neg_bracket(y, t, u) * (-decay).exp()).clamp(0.0, 1.0));
    }
    Ok(q_pos_closed(y, t, u))
}

fn q_pos_closed(y: f64, t: f64, u: f64) -> f64 {
    // z = y sqrt(u / (t (t - u))); 1 - 2Φ(-z) is rewritten as erf(z/√2)
    let z = y * (u / (t * (t - u))).sqrt();
    let body = erf(z * FRAC_1_SQRT_2) + 2.0 * (u / t) * (1.0 - y * y / t) * std_normal_cdf(-z);
    let tail = (2.0 * u * (t - u) / (PI * t.powi(3))).sqrt() * y * (-0.5 * z * z).exp();
    (body + tail).clamp(0.0, 1.0)
}

/// Probability that a bridge of length `t` from `y` to zero spends at most
/// `u` time units below zero.
pub fn q(y: f64, t: f64, u: f64) -> f64 {
    if u >= t {
        return 1.0;
    }
    if y == 0.0 {
        return (u / t).clamp(0.0, 1.0);
    }
    q_closed(y, t, u).unwrap_or(0.0)
}

/// Upper bound `C` with `q(y, t, 1) ≤ C / t` for `t ≥ 2`.
pub(crate) fn q_unit_tail_constant(y: f64) -> f64 {
    if y <= 0.0 {
        1.0
    } else {
        2.0 + 8.0 * y / PI.sqrt()
    }
}

/// `q(y, t, 1) t^(-1/2) exp(-y²/2t)`, multiplied by `exp(y²/2)` when `y < 0`
/// so that it stays O(1) for large `|y|`.
pub(crate) fn scaled_unit_integrand(y: f64, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if y < 0.0 {
        if t <= 1.0 {
            return (0.5 * y * y * (1.0 - 1.0 / t)).exp() / t.sqrt();
        }
        return q_neg_bracket(y, t, 1.0) / t.sqrt();
    }
    q(y, t, 1.0) * (-(y * y) / (2.0 * t)).exp() / t.sqrt()
}

/// Exact first-hit mass `exp(-2yz/t)` for same-side endpoints.
#[cfg(test)]
fn same_side_mass(spec: &BridgeSpec) -> f64 {
    if spec.y * spec.z <= 0.0 {
        1.0
    } else {
        (-2.0 * spec.y * spec.z / spec.t).exp()
    }
}
