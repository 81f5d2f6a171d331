//! Exact Gaussian samplers on a uniform grid.

use super::path::GridPath;
use super::rng::RngStream;
use crate::error::{domain, Result};

/// Number of steps and the actual step for covering `[0, span]` with steps
/// no larger than `step`. When `span / step` is an integer (up to rounding)
/// the requested step is kept.
pub(crate) fn grid_size(span: f64, step: f64) -> Result<(usize, f64)> {
    if !(span > 0.0 && span.is_finite()) {
        return domain(format!("time span must be positive and finite, got {span}"));
    }
    if !(step > 0.0 && step <= span) {
        return domain(format!("step must lie in (0, {span}], got {step}"));
    }
    let ratio = span / step;
    if ratio > 1e9 {
        return domain(format!("{ratio:.3e} grid steps requested; refusing"));
    }
    let n = ((ratio - 1e-9).ceil() as usize).max(1);
    Ok((n, span / n as f64))
}

/// Brownian motion from `y` on `[0, horizon]`.
pub fn sample_bm(y: f64, horizon: f64, step: f64, rng: &mut RngStream) -> Result<GridPath> {
    if !y.is_finite() {
        return domain("start must be finite");
    }
    let (n, h) = grid_size(horizon, step)?;
    let sd = h.sqrt();
    let mut values = Vec::with_capacity(n + 1);
    let mut x = y;
    values.push(x);
    for _ in 0..n {
        x += sd * rng.normal();
        values.push(x);
    }
    GridPath::new(h, values, 0.0)
}

/// Brownian bridge from `y` to `z` over `[0, t]`.
pub fn sample_bridge(y: f64, z: f64, t: f64, step: f64, rng: &mut RngStream) -> Result<GridPath> {
    if !(y.is_finite() && z.is_finite()) {
        return domain("bridge endpoints must be finite");
    }
    let (n, h) = grid_size(t, step)?;
    let values = bridge_values(y, z, n, h, rng);
    GridPath::new(h, values, 0.0)
}

/// `n + 1` values of a bridge from `y` to `z` on a grid of spacing `h`.
/// A free walk is drawn and its end pinned, which gives the bridge law exactly.
pub(crate) fn bridge_values(y: f64, z: f64, n: usize, h: f64, rng: &mut RngStream) -> Vec<f64> {
    let sd = h.sqrt();
    let mut walk = Vec::with_capacity(n + 1);
    let mut w = 0.0;
    walk.push(w);
    for _ in 0..n {
        w += sd * rng.normal();
        walk.push(w);
    }
    let pin = z - y - w;
    let mut values: Vec<f64> = walk
        .iter()
        .enumerate()
        .map(|(k, &wk)| y + wk + (k as f64 / n as f64) * pin)
        .collect();
    values[n] = z;
    values
}

/// Three-dimensional Bessel process from `y >= 0` on `[0, horizon]`.
pub fn sample_bessel3(y: f64, horizon: f64, step: f64, rng: &mut RngStream) -> Result<GridPath> {
    if !(y >= 0.0 && y.is_finite()) {
        return domain(format!("Bessel(3) start must be finite and >= 0, got {y}"));
    }
    let (n, h) = grid_size(horizon, step)?;
    let sd = h.sqrt();
    let mut pos = [y, 0.0, 0.0];
    let mut values = Vec::with_capacity(n + 1);
    values.push(y);
    for _ in 0..n {
        for c in &mut pos {
            *c += sd * rng.normal();
        }
        values.push(norm(&pos));
    }
    GridPath::new(h, values, 0.0)
}

pub(crate) fn norm(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samplers::path::occupation_below_zero;

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    #[test]
    fn grid_size_keeps_exact_steps() {
        assert_eq!(grid_size(2.0, 0.25).unwrap(), (8, 0.25));
        assert_eq!(grid_size(1.0, 1.0).unwrap(), (1, 1.0));
        let (n, h) = grid_size(1.0, 0.3).unwrap();
        assert_eq!(n, 4);
        assert!(h <= 0.3);
        assert!(grid_size(1.0, 2.0).is_err());
        assert!(grid_size(1.0, 0.0).is_err());
    }

    #[test]
    fn bm_start_mean_and_variance() {
        let (y, t) = (0.7, 2.0);
        let n = 100_000;
        let ends: Vec<f64> = (0..n)
            .map(|i| {
                let mut rng = RngStream::new(11, i);
                let p = sample_bm(y, t, 0.5, &mut rng).unwrap();
                assert_eq!(p.values()[0], y);
                p.last()
            })
            .collect();
        let (m, v) = mean_var(&ends);
        let nf = n as f64;
        assert!((m - y).abs() < 3.0 * (t / nf).sqrt());
        // Var of the sample variance of a Gaussian is 2σ⁴/(n-1)
        assert!((v - t).abs() < 3.0 * t * (2.0 / (nf - 1.0)).sqrt());
    }

    #[test]
    fn bridge_endpoints_and_midpoint_variance() {
        let t = 3.0;
        let n = 100_000;
        let mids: Vec<f64> = (0..n)
            .map(|i| {
                let mut rng = RngStream::new(12, i);
                let p = sample_bridge(1.0, -2.0, t, 0.75, &mut rng).unwrap();
                assert_eq!(p.values()[0], 1.0);
                assert_eq!(p.last(), -2.0);
                p.value_at(t / 2.0)
            })
            .collect();
        let (m, v) = mean_var(&mids);
        let target = t / 4.0;
        assert!((m + 0.5).abs() < 3.0 * (target / n as f64).sqrt());
        assert!((v - target).abs() < 3.0 * target * (2.0 / (n as f64 - 1.0)).sqrt());
    }

    #[test]
    fn zero_bridge_occupation_is_uniform() {
        let n = 10_000;
        let mut occ: Vec<f64> = (0..n)
            .map(|i| {
                let mut rng = RngStream::new(13, i);
                let p = sample_bridge(0.0, 0.0, 1.0, 1.0 / 1024.0, &mut rng).unwrap();
                occupation_below_zero(&p, 1.0).unwrap()
            })
            .collect();
        occ.sort_by(f64::total_cmp);
        let ks = occ
            .iter()
            .enumerate()
            .map(|(i, &u)| {
                ((i + 1) as f64 / n as f64 - u)
                    .abs()
                    .max((u - i as f64 / n as f64).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks <= 0.02, "KS {ks}");
    }

    #[test]
    fn bessel_second_moment_and_positivity() {
        let (y, t) = (0.5, 2.0);
        let n = 100_000;
        let sq: Vec<f64> = (0..n)
            .map(|i| {
                let mut rng = RngStream::new(14, i);
                let p = sample_bessel3(y, t, 0.25, &mut rng).unwrap();
                assert_eq!(p.values()[0], y);
                assert!(p.values()[1..].iter().all(|&v| v > 0.0));
                p.last() * p.last()
            })
            .collect();
        let (m, _) = mean_var(&sq);
        // Z_T² = (y + √T N₁)² + T(N₂² + N₃²); its variance is 4y²T + 6T²
        let sd = (4.0 * y * y * t + 6.0 * t * t).sqrt();
        assert!((m - (y * y + 3.0 * t)).abs() < 3.0 * sd / (n as f64).sqrt());
        assert!(sample_bessel3(-0.1, 1.0, 0.1, &mut RngStream::new(0, 0)).is_err());
    }

    #[test]
    fn reproducible() {
        let a = sample_bm(0.0, 1.0, 0.01, &mut RngStream::new(5, 9)).unwrap();
        let b = sample_bm(0.0, 1.0, 0.01, &mut RngStream::new(5, 9)).unwrap();
        assert_eq!(a, b);
    }
}
