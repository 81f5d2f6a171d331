//! Empirical distribution functions and Kolmogorov-Smirnov distances.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::CdfTable;
use crate::samplers::SampleBatch;

fn sorted(draws: &[f64]) -> Result<Vec<f64>> {
    if draws.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut xs = draws.to_vec();
    xs.sort_by(f64::total_cmp);
    Ok(xs)
}

/// Distinct sorted values with the count of draws `≤` each.
fn distinct_with_counts(xs: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut grid = Vec::new();
    let mut counts = Vec::new();
    for (i, &x) in xs.iter().enumerate() {
        if grid.last() == Some(&x) {
            *counts.last_mut().unwrap() = i + 1;
        } else {
            grid.push(x);
            counts.push(i + 1);
        }
    }
    (grid, counts)
}

/// Empirical distribution function as a right-continuous step table. Draws
/// equal to zero go into the atom.
pub fn ecdf(batch: &SampleBatch) -> Result<CdfTable> {
    ecdf_of(&batch.draws)
}

pub fn ecdf_of(draws: &[f64]) -> Result<CdfTable> {
    let xs = sorted(draws)?;
    let n = xs.len() as f64;
    let (grid, counts) = distinct_with_counts(&xs);
    let zeros = xs.iter().filter(|&&x| x == 0.0).count() as f64 / n;
    let below = xs.iter().filter(|&&x| x < 0.0).count();
    // The atom is only meaningful when nothing lies below zero.
    let atom = if below == 0 { zeros } else { 0.0 };
    let values = counts.iter().map(|&c| c as f64 / n).collect();
    CdfTable::new(atom, grid, values)
}

/// `sup |A − B|` between two step distribution functions. Both are constant
/// between the union of their grid points, so checking the union and one
/// point below each side of zero is exact.
pub fn ks_distance(a: &CdfTable, b: &CdfTable) -> f64 {
    let mut points: Vec<f64> = a.grid().iter().chain(b.grid()).copied().collect();
    points.push(0.0);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let first = points[0];
    let mut probes = vec![first - 1.0, -f64::MIN_POSITIVE];
    probes.extend(points);
    probes
        .into_iter()
        .map(|x| (a.eval(x) - b.eval(x)).abs())
        .fold(0.0, f64::max)
}

/// Two-sample KS statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let xa = sorted(a)?;
    let xb = sorted(b)?;
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// One-sample KS statistic against a continuous distribution function that
/// may carry a jump of size `atom` at zero. At each distinct draw both the
/// value and the left limit are compared.
pub fn ks_one_sample<F>(draws: &[f64], cdf: F, atom: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let xs = sorted(draws)?;
    let n = xs.len() as f64;
    let (grid, counts) = distinct_with_counts(&xs);
    let model: Vec<f64> = grid.par_iter().map(|&x| cdf(x)).collect::<Result<_>>()?;
    let mut d: f64 = 0.0;
    let mut prev = 0usize;
    for ((&x, &c), &f) in grid.iter().zip(&counts).zip(&model) {
        let left_model = if x == 0.0 { f - atom } else { f };
        d = d
            .max((c as f64 / n - f).abs())
            .max((prev as f64 / n - left_model).abs());
        prev = c;
    }
    // Just above zero, when no draw lands exactly on it.
    if atom > 0.0 && !grid.contains(&0.0) {
        let at_zero = xs.iter().filter(|&&x| x <= 0.0).count() as f64 / n;
        d = d.max((at_zero - cdf(0.0)?).abs());
    }
    Ok(d)
}
