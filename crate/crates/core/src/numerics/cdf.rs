//! Tabulated distribution functions and monotone inversion.

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// A distribution function sampled on a strictly increasing grid, with an
/// explicit point mass at zero.
///
/// Between grid points the table is read as a right-continuous step
/// function, which is exact for empirical CDFs. The grid may extend below
/// zero for laws supported on the whole line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CdfTable {
    atom_at_zero: f64,
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl CdfTable {
    pub fn new(atom_at_zero: f64, grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if !(0.0..=1.0).contains(&atom_at_zero) {
            return domain(format!("atom {atom_at_zero} outside [0, 1]"));
        }
        if grid.is_empty() || grid.len() != values.len() {
            return domain("grid and values must be non-empty and of equal length");
        }
        if grid.iter().any(|x| !x.is_finite()) {
            return domain("grid points must be finite");
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return domain("grid must be strictly increasing");
        }
        if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return domain("values must lie in [0, 1]");
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return domain("values must be non-decreasing");
        }
        if grid[0] >= 0.0 && atom_at_zero > values[0] {
            return domain(format!("atom {atom_at_zero} exceeds first value {}", values[0]));
        }
        Ok(Self {
            atom_at_zero,
            grid,
            values,
        })
    }

    /// Tabulates `cdf` on `grid`, clamping roundoff excursions outside
    /// `[0, 1]` and enforcing monotonicity by a running maximum.
    pub fn tabulate<F>(atom_at_zero: f64, grid: Vec<f64>, cdf: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let mut values = Vec::with_capacity(grid.len());
        let mut running = 0.0f64;
        for &x in &grid {
            let v = cdf(x)?.clamp(0.0, 1.0);
            running = running.max(v);
            values.push(running);
        }
        Self::new(atom_at_zero, grid, values)
    }

    pub fn atom_at_zero(&self) -> f64 {
        self.atom_at_zero
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Right-continuous step evaluation; below the first grid point the
    /// atom counts from zero onwards.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.grid.partition_point(|&g| g <= x);
        if idx == 0 {
            return if x >= 0.0 { self.atom_at_zero } else { 0.0 };
        }
        self.values[idx - 1]
    }
}

/// Smallest `x` in `[lo, hi]` with `f(x) >= p`, found by bisection.
///
/// Iterates until the bracket collapses to adjacent floats or the bracketing
/// value is within `1e-10` of `p`, whichever comes later in the sense that the
/// returned point always satisfies `f(x) >= p`.
pub fn invert_cdf<F>(f: F, lo: f64, hi: f64, p: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(lo <= hi) {
        return domain(format!("empty bracket [{lo}, {hi}]"));
    }
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if p.is_nan() || p < f_lo - 1e-15 || p > f_hi {
        return Err(Error::OutOfRange { p, lo: f_lo, hi: f_hi });
    }
    if f_lo >= p {
        return Ok(lo);
    }
    let (mut a, mut b) = (lo, hi);
    let mut f_b = f_hi;
    for _ in 0..2000 {
        let mid = a + 0.5 * (b - a);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid)?;
        if fm >= p {
            b = mid;
            f_b = fm;
        } else {
            a = mid;
        }
        // Stop once the bracket is tight in x; F-accuracy follows for
        // continuous F, and jumps are resolved toward the smallest x.
        if b - a <= 1e-15 * b.abs().max(1e-300) && f_b - p <= 1e-10 {
            break;
        }
    }
    Ok(b)
}
