//! Distribution functions of the last zero `g` and the occupation time `Γ`
//! of the limit process, the identities linking them, and their limits as
//! the starting point moves far from the barrier.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::bridge_laws::{q, q_neg_bracket, q_unit_tail_constant, scaled_unit_integrand};
use crate::error::{domain, Error, Result};
use crate::numerics::{erfc, integrate, invert_cdf, CdfTable, QuadratureSpec};

const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Starting point `y` and occupation budget `c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StartSpec {
    pub y: f64,
    pub c: f64,
}

impl StartSpec {
    pub fn new(y: f64, c: f64) -> Result<Self> {
        if !y.is_finite() {
            return domain("starting point must be finite");
        }
        if !(c > 0.0) || !c.is_finite() {
            return domain(format!("budget must be positive and finite, got {c}"));
        }
        Ok(Self { y, c })
    }

    pub fn unit(y: f64) -> Result<Self> {
        Self::new(y, 1.0)
    }
}

/// Brownian scaling: with budget `c`, `g` and `Γ` are `c` times the
/// unit-budget variables started at `y/√c`. Returns `(y/√c, c)`.
pub fn reduce_to_unit_budget(spec: &StartSpec) -> Result<(f64, f64)> {
    if !(spec.c > 0.0) {
        return domain(format!("budget must be positive, got {}", spec.c));
    }
    Ok((spec.y / spec.c.sqrt(), spec.c))
}

/// `P(g = 0) = P(Γ = 0)`.
pub fn g_atom(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        SQRT_2PI * y / (SQRT_2PI * y + 2.0)
    }
}

/// `∫_0^u t^(-1/2) exp(-y²/2t) dt`, times `exp(y²/2)` when `y < 0`.
fn heat_weight_integral(y: f64, u: f64, quad: &QuadratureSpec) -> Result<f64> {
    if u <= 0.0 {
        return Ok(0.0);
    }
    let half_y2 = 0.5 * y * y;
    let scaled = y < 0.0;
    integrate(
        |t: f64| {
            if t <= 0.0 {
                return 0.0;
            }
            let e = if scaled {
                half_y2 * (1.0 - 1.0 / t)
            } else {
                -half_y2 / t
            };
            e.exp() / t.sqrt()
        },
        0.0,
        u,
        quad,
        true,
    )
}

/// `∫_1^x` of the unit-budget `g` integrand (scaled as in
/// [`heat_weight_integral`]), on a logarithmic time axis.
fn unit_integrand_beyond_one(y: f64, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    if x <= 1.0 {
        return Ok(0.0);
    }
    integrate(
        |s: f64| {
            let t = s.exp();
            scaled_unit_integrand(y, t) * t
        },
        0.0,
        x.ln(),
        quad,
        true,
    )
}

/// Unnormalised mass `∫_0^x q(t,1) t^(-1/2) e^(-y²/2t) dt` (scaled for y < 0).
fn g_numerator(y: f64, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(heat_weight_integral(y, x.min(1.0), quad)? + unit_integrand_beyond_one(y, x, quad)?)
}

/// `P(g ≤ x)` for the last zero of the limit process.
pub fn g_cdf(y: f64, x: f64) -> Result<f64> {
    g_cdf_with(y, x, &QuadratureSpec::default())
}

pub fn g_cdf_with(y: f64, x: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(x >= 0.0) {
        return domain(format!("last-zero CDF needs x ≥ 0, got {x}"));
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let value = if y == 0.0 {
        if x <= 1.0 {
            0.5 * x.sqrt()
        } else {
            1.0 - 0.5 / x.sqrt()
        }
    } else if y < 0.0 {
        g_numerator(y, x, quad)? / (2.0 * heat_weight_integral(y, 1.0, quad)?)
    } else {
        (2.0 * SQRT_2PI * y + g_numerator(y, x, quad)?) / (2.0 * SQRT_2PI * y + 4.0)
    };
    Ok(value.clamp(0.0, 1.0))
}

/// Truncation point of the `g` normalisation integral: doubles `T` from 2
/// until the proven tail bound `2C/√T` (from `q(t,1) ≤ C/t`) is at most
/// `1e-10` of the mass accumulated on `[0, T]`.
pub fn g_tail_truncation(y: f64) -> Result<f64> {
    let quad = QuadratureSpec::default();
    let bound = 2.0 * q_unit_tail_constant(y);
    // Unscaled mass; the y < 0 integrand carries a factor exp(y²/2).
    let unscale = if y < 0.0 { (-0.5 * y * y).exp() } else { 1.0 };
    let mut upper = 2.0;
    let mut mass = g_numerator(y, upper, &quad)? * unscale;
    for _ in 0..4000 {
        if bound / upper.sqrt() <= 1e-10 * mass {
            return Ok(upper);
        }
        let next = 2.0 * upper;
        mass += integrate(
            |s: f64| {
                let t = upper * s.exp();
                scaled_unit_integrand(y, t) * t
            },
            0.0,
            std::f64::consts::LN_2,
            &quad,
            false,
        )? * unscale;
        upper = next;
    }
    Err(Error::NonConvergence {
        a: 0.0,
        b: upper,
        subdivisions: 4000,
        error_estimate: bound / upper.sqrt(),
    })
}

/// `P(Γ ≤ u)` for the total occupation time below zero.
pub fn gamma_cdf(y: f64, u: f64) -> Result<f64> {
    gamma_cdf_with(y, u, &QuadratureSpec::default())
}

pub fn gamma_cdf_with(y: f64, u: f64, quad: &QuadratureSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) {
        return domain(format!("occupation CDF needs u in [0, 1], got {u}"));
    }
    if y >= 0.0 {
        return Ok((SQRT_2PI * y + 2.0 * u.sqrt()) / (SQRT_2PI * y + 2.0));
    }
    if u == 1.0 {
        return Ok(1.0);
    }
    let value = heat_weight_integral(y, u, quad)? / heat_weight_integral(y, 1.0, quad)?;
    Ok(value.clamp(0.0, 1.0))
}

/// `P(Γ ≤ u | Γ > 0)` for `y ≥ 0`, which is `√u` whatever the start.
pub fn gamma_conditional_cdf(y: f64, u: f64) -> Result<f64> {
    if y < 0.0 {
        return domain("conditional occupation law needs y ≥ 0");
    }
    if !(0.0..=1.0).contains(&u) {
        return domain(format!("u must lie in [0, 1], got {u}"));
    }
    Ok(u.sqrt())
}

/// Both sides of the integral identity for `q(·, u)` against the heat
/// weight: for `y < 0`, `∫_u^∞ q(t,u) w = ∫_0^u w`; for `y > 0`,
/// `∫_0^u w + ∫_u^∞ q(t,u) w = 4√u`, with `w(t) = t^(-1/2) e^(-y²/2t)`.
pub fn intlem_check(y: f64, u: f64) -> Result<(f64, f64)> {
    if y == 0.0 || !y.is_finite() {
        return domain("identity check needs a finite nonzero y");
    }
    if !(u > 0.0) || !u.is_finite() {
        return domain(format!("identity check needs u > 0, got {u}"));
    }
    let quad = QuadratureSpec::new(1e-13, 1e-11, 4000)?;
    let y2 = y * y;
    if y < 0.0 {
        // Both sides carry a factor exp(y²/2u) in the working scale.
        let lhs = integrate(
            |t: f64| {
                if t <= u {
                    return 1.0 / u.sqrt();
                }
                q_neg_bracket(y, t, u) / t.sqrt()
            },
            u,
            f64::INFINITY,
            &quad,
            true,
        )?;
        let rhs = integrate(
            |t: f64| {
                if t <= 0.0 {
                    return 0.0;
                }
                (0.5 * y2 * (1.0 / u - 1.0 / t)).exp() / t.sqrt()
            },
            0.0,
            u,
            &quad,
            true,
        )?;
        let back = (-0.5 * y2 / u).exp();
        return Ok((lhs * back, rhs * back));
    }
    let head = heat_weight_integral(y, u, &quad)?;
    let tail = integrate(
        |t: f64| q(y, t, u) * (-0.5 * y2 / t).exp() / t.sqrt(),
        u,
        f64::INFINITY,
        &quad,
        true,
    )?;
    Ok((head + tail, 4.0 * u.sqrt()))
}

/// Distribution function of the limit of `y²(1 - g)` as `y → -∞`.
pub fn gprime_cdf(u: f64) -> Result<f64> {
    if u.is_nan() {
        return domain("gprime_cdf argument is NaN");
    }
    if u >= 0.0 {
        return Ok(1.0 - 0.5 * (-0.5 * u).exp());
    }
    if u == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let quad = QuadratureSpec::default();
    let v = integrate(
        |z: f64| 2.0 * z / (2.0 * PI * (2.0 * z - u)).sqrt() * (-z).exp(),
        0.0,
        f64::INFINITY,
        &quad,
        false,
    )?;
    Ok(v.clamp(0.0, 1.0))
}

/// Density of `1/N²` for standard normal `N`.
pub fn inv_chisq_density(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    (-0.5 / s).exp() / (2.0 * PI * s.powi(3)).sqrt()
}

/// `P(1/N² ≤ s) = 2(1 - Φ(1/√s))`.
pub fn inv_chisq_cdf(s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    erfc((0.5 / s).sqrt())
}

/// Exponential distribution with rate 1/2.
pub fn exp_half_cdf(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        -(-0.5 * u).exp_m1()
    }
}

/// Smallest `x` with `P(g ≤ x) ≥ p`.
pub fn g_quantile(y: f64, p: f64) -> Result<f64> {
    GDistribution::new(y)?.quantile(p)
}

/// Smallest `u` with `P(Γ ≤ u) ≥ p`.
pub fn gamma_quantile(y: f64, p: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::OutOfRange { p, lo: 0.0, hi: 1.0 });
    }
    if p <= g_atom(y) {
        return Ok(0.0);
    }
    let quad = QuadratureSpec::default();
    if y < 0.0 {
        let norm = heat_weight_integral(y, 1.0, &quad)?;
        let target = p * norm;
        return invert_cdf(|u| heat_weight_integral(y, u, &quad), 0.0, 1.0, target);
    }
    invert_cdf(|u| gamma_cdf_with(y, u, &quad), 0.0, 1.0, p)
}

/// Knots per doubling of time in [`GDistribution`].
const KNOTS_PER_OCTAVE: i32 = 8;
const FIRST_KNOT_EXP: i32 = -48;

/// Law of `g` for one starting point with the cumulative integral cached on
/// a geometric knot grid, so repeated CDF and quantile calls need only one
/// short quadrature.
#[derive(Debug, Clone)]
pub struct GDistribution {
    y: f64,
    quad: QuadratureSpec,
    /// Mass already present at `x = 0` in numerator units.
    offset: f64,
    denominator: f64,
    knots: Vec<f64>,
    cumulative: Vec<f64>,
}

impl GDistribution {
    pub fn new(y: f64) -> Result<Self> {
        if !y.is_finite() {
            return domain("starting point must be finite");
        }
        let quad = QuadratureSpec::default();
        let (offset, denominator) = if y < 0.0 {
            (0.0, 2.0 * heat_weight_integral(y, 1.0, &quad)?)
        } else {
            let off = 2.0 * SQRT_2PI * y;
            (off, off + 4.0)
        };
        let first = 2f64.powi(FIRST_KNOT_EXP);
        let mut knots = vec![first];
        let mut cumulative = vec![Self::density_integral(y, 0.0, first, &quad)?];
        let mut k = FIRST_KNOT_EXP * KNOTS_PER_OCTAVE;
        // The density decays like t^(-3/2), so 2 t f(t) estimates the mass
        // beyond t.
        loop {
            let last = knots[knots.len() - 1];
            let tail = 2.0 * last * Self::density(y, last);
            if (last > 2.0 && tail <= 1e-14 * denominator) || k >= 120 * KNOTS_PER_OCTAVE {
                break;
            }
            k += 1;
            let b = 2f64.powf(k as f64 / KNOTS_PER_OCTAVE as f64);
            let piece = Self::density_integral(y, last, b, &quad)?;
            knots.push(b);
            cumulative.push(cumulative[cumulative.len() - 1] + piece);
        }
        Ok(Self {
            y,
            quad,
            offset,
            denominator,
            knots,
            cumulative,
        })
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn atom(&self) -> f64 {
        g_atom(self.y)
    }

    fn density(y: f64, t: f64) -> f64 {
        if y == 0.0 {
            return if t <= 1.0 { 1.0 / t.sqrt() } else { t.powf(-1.5) };
        }
        scaled_unit_integrand(y, t)
    }

    fn density_integral(y: f64, a: f64, b: f64, quad: &QuadratureSpec) -> Result<f64> {
        if b <= a {
            return Ok(0.0);
        }
        integrate(|t| Self::density(y, t), a, b, quad, true)
    }

    /// Unnormalised density of `g` at `x > 0` in the same units as the CDF
    /// numerator; divide by [`Self::normaliser`] for the probability density.
    pub fn unnormalised_density(&self, x: f64) -> f64 {
        Self::density(self.y, x)
    }

    pub fn normaliser(&self) -> f64 {
        self.denominator
    }

    fn numerator(&self, x: f64) -> Result<f64> {
        let idx = self.knots.partition_point(|&k| k <= x);
        if idx == 0 {
            return Self::density_integral(self.y, 0.0, x, &self.quad);
        }
        let base = self.cumulative[idx - 1];
        Ok(base + Self::density_integral(self.y, self.knots[idx - 1], x, &self.quad)?)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) {
            return domain(format!("last-zero CDF needs x ≥ 0, got {x}"));
        }
        if x.is_infinite() {
            return Ok(1.0);
        }
        Ok(((self.offset + self.numerator(x)?) / self.denominator).clamp(0.0, 1.0))
    }

    /// Smallest `x` with `cdf(x) ≥ p`; zero inside the atom.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::OutOfRange { p, lo: 0.0, hi: 1.0 });
        }
        let target = p * self.denominator - self.offset;
        if target <= 0.0 {
            return Ok(0.0);
        }
        let idx = self.cumulative.partition_point(|&c| c < target);
        if idx == 0 {
            return invert_cdf(
                |x| Self::density_integral(self.y, 0.0, x, &self.quad),
                0.0,
                self.knots[0],
                target,
            );
        }
        if idx == self.knots.len() {
            // Beyond the grid the mass decays like t^(-1/2).
            let last = self.knots[idx - 1];
            let tail_now = 2.0 * last * Self::density(self.y, last);
            let tail_target = (1.0 - p) * self.denominator;
            if tail_target >= tail_now || tail_target <= 0.0 {
                return Ok(last);
            }
            return Ok(last * (tail_now / tail_target).powi(2));
        }
        let a = self.knots[idx - 1];
        let base = self.cumulative[idx - 1];
        invert_cdf(
            |x| Ok(base + Self::density_integral(self.y, a, x, &self.quad)?),
            a,
            self.knots[idx],
            target.min(self.cumulative[idx]),
        )
    }
}

/// Laws that can be tabulated into a [`LimitLawReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LawName {
    G,
    Gamma,
    GConditional,
    Gprime,
    ExpHalf,
    InvChisq,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitLawReport {
    pub law_name: LawName,
    pub table: CdfTable,
}

/// Default 400-point grid for `g`: `2^((k-200)/20)`, containing 1 and 4.
pub fn default_g_grid() -> Vec<f64> {
    (0..400).map(|k| 2f64.powf((k as f64 - 200.0) / 20.0)).collect()
}

/// Default 400-point grid for `Γ`: `2^(-(399-k)/20)`, ending at 1.
pub fn default_gamma_grid() -> Vec<f64> {
    (0..400).map(|k| 2f64.powf(-(399.0 - k as f64) / 20.0)).collect()
}

fn par_tabulate<F>(atom: f64, grid: Vec<f64>, cdf: F) -> Result<CdfTable>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let values: Vec<f64> = grid.par_iter().map(|&x| cdf(x)).collect::<Result<Vec<_>>>()?;
    let mut running = 0.0f64;
    let values = values
        .into_iter()
        .map(|v| {
            running = running.max(v.clamp(0.0, 1.0));
            running
        })
        .collect();
    CdfTable::new(atom, grid, values)
}

/// Tabulates one law on its default grid. `y` is ignored by the laws that do
/// not depend on it.
pub fn tabulate_law(law: LawName, y: f64) -> Result<LimitLawReport> {
    let table = match law {
        LawName::G => {
            let dist = GDistribution::new(y)?;
            par_tabulate(g_atom(y), default_g_grid(), |x| dist.cdf(x))?
        }
        LawName::Gamma => par_tabulate(g_atom(y), default_gamma_grid(), |u| gamma_cdf(y, u))?,
        LawName::GConditional => {
            let dist = GDistribution::new(y)?;
            let atom = g_atom(y);
            let y2 = (y * y).max(1.0);
            par_tabulate(0.0, default_g_grid(), |s| Ok((dist.cdf(s * y2)? - atom) / (1.0 - atom)))?
        }
        LawName::Gprime => {
            let grid = (0..400).map(|k| -50.0 + 100.0 * k as f64 / 399.0).collect();
            par_tabulate(0.0, grid, gprime_cdf)?
        }
        LawName::ExpHalf => {
            let grid = (0..400).map(|k| 20.0 * k as f64 / 399.0).collect();
            par_tabulate(0.0, grid, |u| Ok(exp_half_cdf(u)))?
        }
        LawName::InvChisq => par_tabulate(0.0, default_g_grid(), |s| Ok(inv_chisq_cdf(s)))?,
    };
    Ok(LimitLawReport { law_name: law, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn budget_reduction() {
        assert_eq!(
            reduce_to_unit_budget(&StartSpec::new(2.0, 1.0).unwrap()).unwrap(),
            (2.0, 1.0)
        );
        assert_eq!(
            reduce_to_unit_budget(&StartSpec::new(2.0, 4.0).unwrap()).unwrap(),
            (1.0, 4.0)
        );
        assert_eq!(
            reduce_to_unit_budget(&StartSpec::new(-3.0, 0.25).unwrap()).unwrap(),
            (-6.0, 0.25)
        );
        assert!(StartSpec::new(1.0, 0.0).is_err());
    }

    #[test]
    fn atom_values() {
        assert_eq!(g_atom(0.0), 0.0);
        assert_eq!(g_atom(-1.0), 0.0);
        let s = (2.0 * PI).sqrt();
        assert_abs_diff_eq!(g_atom(1.0), s / (s + 2.0), epsilon = 1e-15);
        assert_abs_diff_eq!(g_atom(1.0), 0.556_21, epsilon = 1e-5);
    }

    #[test]
    fn zero_start_closed_forms() {
        assert_eq!(g_cdf(0.0, 1.0).unwrap(), 0.5);
        assert_eq!(g_cdf(0.0, 4.0).unwrap(), 0.75);
        assert_eq!(gamma_cdf(0.0, 0.25).unwrap(), 0.5);
        assert_abs_diff_eq!(g_quantile(0.0, 0.5).unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(gamma_quantile(0.0, 0.7).unwrap(), 0.49, epsilon = 1e-9);
        assert_eq!(g_quantile(1.0, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn finite_last_zero() {
        // 1 - P(g ≤ x) decays like 0.36/√x at y = -1; reference from a
        // 30-digit quadrature of the same closed form.
        assert_abs_diff_eq!(g_cdf(-1.0, 1e6).unwrap(), 1.0 - 3.607_521_007_814e-4, epsilon = 1e-9);
        assert!(g_cdf(-1.0, 1e8).unwrap() >= 1.0 - 1e-4);
        for &y in &[-2.0, -0.5, 0.5, 2.0] {
            let t = g_tail_truncation(y).unwrap();
            assert!(g_cdf(y, t).unwrap() >= 1.0 - 1e-4);
        }
    }

    #[test]
    fn gamma_boundaries_and_branches() {
        for &y in &[-3.0, -0.5, 0.0, 0.5, 3.0] {
            assert_abs_diff_eq!(gamma_cdf(y, 1.0).unwrap(), 1.0, epsilon = 1e-12);
        }
        for &u in &[0.1, 0.5, 0.9] {
            assert_abs_diff_eq!(gamma_cdf(-1e-9, u).unwrap(), f64::sqrt(u), epsilon = 1e-7);
        }
        assert!(gamma_cdf(1.0, 1.5).is_err());
    }

    #[test]
    fn last_zero_and_occupation_identity() {
        for &y in &[-2.0, -1.0, -0.5] {
            for &u in &[0.05, 0.25, 0.5, 0.8] {
                let two_g = 2.0 * g_cdf(y, u).unwrap();
                assert_abs_diff_eq!(two_g, gamma_cdf(y, u).unwrap(), epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn conditional_occupation() {
        assert_eq!(gamma_conditional_cdf(2.0, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(gamma_conditional_cdf(2.0, 0.49).unwrap(), 0.7, epsilon = 1e-15);
        assert_eq!(gamma_conditional_cdf(0.3, 1.0).unwrap(), 1.0);
        assert!(gamma_conditional_cdf(-1.0, 0.5).is_err());
    }

    #[test]
    fn integral_identities() {
        let (l, r) = intlem_check(-1.0, 1.0).unwrap();
        assert_abs_diff_eq!(l, r, epsilon = 1e-6);
        let (l, r) = intlem_check(2.0, 1.0).unwrap();
        assert_eq!(r, 4.0);
        assert_abs_diff_eq!(l, 4.0, epsilon = 1e-6);
        let (l, r) = intlem_check(0.5, 0.25).unwrap();
        assert_eq!(r, 2.0);
        assert_abs_diff_eq!(l, 2.0, epsilon = 1e-6);
    }

    #[test]
    fn gprime_values() {
        assert_abs_diff_eq!(gprime_cdf(0.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(gprime_cdf(-1e-10).unwrap(), 0.5, epsilon = 1e-8);
        assert_abs_diff_eq!(gprime_cdf(2.0).unwrap(), 0.816_060_279_414_278_8, epsilon = 1e-14);
        assert_abs_diff_eq!(gprime_cdf(50.0).unwrap(), 1.0, epsilon = 1e-6);
        // the left tail decays only like |u|^(-1/2)
        assert!(gprime_cdf(-1e14).unwrap() < 1e-6);
        assert_abs_diff_eq!(gprime_cdf(-50.0).unwrap(), 0.108_684_293_278_6, epsilon = 1e-9);
        let grid: Vec<f64> = (0..=200).map(|k| -50.0 + 0.5 * k as f64).collect();
        let vals: Vec<f64> = grid.iter().map(|&u| gprime_cdf(u).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] <= w[1] + 1e-12));
    }

    #[test]
    fn inverse_chi_squared() {
        let quad = QuadratureSpec::default();
        let mass = integrate(inv_chisq_density, 0.0, f64::INFINITY, &quad, false).unwrap();
        assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(inv_chisq_cdf(1.0), 0.317_310_507_862_914_1, epsilon = 1e-14);
        for &s in &[0.1, 0.7, 3.0, 40.0] {
            let by_quad = integrate(inv_chisq_density, 0.0, s, &quad, false).unwrap();
            assert_abs_diff_eq!(inv_chisq_cdf(s), by_quad, epsilon = 1e-9);
        }
        assert_abs_diff_eq!(exp_half_cdf(2.0 * std::f64::consts::LN_2), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn cached_distribution_matches_direct_cdf() {
        for &y in &[-3.0, -0.5, 0.0, 0.5, 3.0] {
            let dist = GDistribution::new(y).unwrap();
            for &x in &[0.0, 1e-3, 0.3, 1.0, 1.7, 12.0, 3e4] {
                assert_abs_diff_eq!(dist.cdf(x).unwrap(), g_cdf(y, x).unwrap(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn quantiles_invert_cdf() {
        for &y in &[-2.0, 0.0, 1.0] {
            let dist = GDistribution::new(y).unwrap();
            for &p in &[0.01, 0.3, 0.6, 0.9, 0.999] {
                let x = dist.quantile(p).unwrap();
                if p > dist.atom() {
                    assert_abs_diff_eq!(dist.cdf(x).unwrap(), p, epsilon = 1e-8);
                } else {
                    assert_eq!(x, 0.0);
                }
            }
            let u = gamma_quantile(y, 0.8).unwrap();
            assert_abs_diff_eq!(gamma_cdf(y, u).unwrap(), 0.8, epsilon = 1e-8);
        }
    }

    #[test]
    fn tabulated_laws_are_valid_tables() {
        for law in [
            LawName::G,
            LawName::Gamma,
            LawName::Gprime,
            LawName::ExpHalf,
            LawName::InvChisq,
        ] {
            let report = tabulate_law(law, 1.0).unwrap();
            let v = report.table.values();
            assert!(v.windows(2).all(|w| w[0] <= w[1]));
            assert!(v.iter().all(|x| (0.0..=1.0).contains(x)));
        }
        let g = tabulate_law(LawName::G, 1.0).unwrap();
        assert_abs_diff_eq!(g.table.atom_at_zero(), g_atom(1.0), epsilon = 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn cdfs_monotone_and_bounded(y in -4.0f64..4.0, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let g_lo = g_cdf(y, lo * 10.0).unwrap();
            let g_hi = g_cdf(y, hi * 10.0).unwrap();
            prop_assert!(g_lo <= g_hi + 1e-10 && g_hi <= 1.0);
            let c_lo = gamma_cdf(y, lo).unwrap();
            let c_hi = gamma_cdf(y, hi).unwrap();
            prop_assert!(c_lo <= c_hi + 1e-10 && c_hi <= 1.0);
            prop_assert!(g_cdf(y, 0.0).unwrap() >= g_atom(y) - 1e-12);
        }
    }
}
