//! Uniform-grid paths and the two path functionals used throughout:
//! time spent below zero and the last zero.

use serde::Serialize;

use crate::error::{domain, Result};

/// Positions on the grid `origin_time + k * step`, `k = 0..len`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPath {
    step: f64,
    values: Vec<f64>,
    origin_time: f64,
}

impl GridPath {
    pub fn new(step: f64, values: Vec<f64>, origin_time: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return domain(format!("grid step must be positive and finite, got {step}"));
        }
        if values.is_empty() {
            return domain("a grid path needs at least one value");
        }
        if !(origin_time >= 0.0 && origin_time.is_finite()) {
            return domain(format!("origin time must be finite and >= 0, got {origin_time}"));
        }
        Ok(Self {
            step,
            values,
            origin_time,
        })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn origin_time(&self) -> f64 {
        self.origin_time
    }

    /// Time span covered, `step * (len - 1)`.
    pub fn duration(&self) -> f64 {
        self.step * (self.values.len() - 1) as f64
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Absolute times of the grid points.
    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |k| self.origin_time + k as f64 * self.step)
    }

    /// Linear interpolation at local time `s` in `[0, duration]`.
    pub fn value_at(&self, s: f64) -> f64 {
        let pos = s / self.step;
        let k = (pos.floor() as usize).min(self.values.len() - 1);
        if k + 1 >= self.values.len() {
            return self.last();
        }
        let frac = pos - k as f64;
        self.values[k] + frac * (self.values[k + 1] - self.values[k])
    }
}

/// Time spent strictly below zero by the segment joining `a` and `b` over a
/// span `h`, with the crossing located by linear interpolation.
pub(crate) fn segment_time_below(a: f64, b: f64, h: f64) -> f64 {
    match (a < 0.0, b < 0.0) {
        (true, true) => h,
        (false, false) => 0.0,
        (true, false) => h * (-a) / (b - a),
        (false, true) => h * (-b) / (a - b),
    }
}

/// Local time of the last zero on the segment `(a, b)` starting at `t0`,
/// if there is one. A zero at `b` itself is reported by the next segment.
pub(crate) fn segment_last_zero(a: f64, b: f64, t0: f64, h: f64) -> Option<f64> {
    if b == 0.0 {
        Some(t0 + h)
    } else if a == 0.0 {
        Some(t0)
    } else if (a < 0.0) != (b < 0.0) {
        Some(t0 + h * a.abs() / (a.abs() + b.abs()))
    } else {
        None
    }
}

fn check_horizon(path: &GridPath, horizon: f64) -> Result<()> {
    let duration = path.duration();
    if !(horizon >= 0.0) || horizon > duration * (1.0 + 1e-12) + 1e-12 {
        return domain(format!("horizon {horizon} outside the path duration [0, {duration}]"));
    }
    Ok(())
}

/// Visits each linear segment of `path` cut at `horizon`, as
/// `(left value, right value, local start time, span)`.
fn for_segments(path: &GridPath, horizon: f64, mut visit: impl FnMut(f64, f64, f64, f64)) {
    let h = path.step;
    let v = &path.values;
    for k in 0..v.len() - 1 {
        let t0 = k as f64 * h;
        if t0 >= horizon {
            break;
        }
        if t0 + h <= horizon {
            visit(v[k], v[k + 1], t0, h);
        } else {
            let span = horizon - t0;
            let end = v[k] + (span / h) * (v[k + 1] - v[k]);
            visit(v[k], end, t0, span);
        }
    }
}

/// Time spent strictly below zero on `[0, horizon]` (local time).
pub fn occupation_below_zero(path: &GridPath, horizon: f64) -> Result<f64> {
    check_horizon(path, horizon)?;
    let mut total = 0.0;
    for_segments(path, horizon, |a, b, _, span| total += segment_time_below(a, b, span));
    Ok(total)
}

/// Last zero of the interpolated path on `[0, horizon]` (local time), or 0
/// when there is none.
pub fn last_zero(path: &GridPath, horizon: f64) -> Result<f64> {
    check_horizon(path, horizon)?;
    let mut last = if path.values[0] == 0.0 { Some(0.0) } else { None };
    for_segments(path, horizon, |a, b, t0, span| {
        if let Some(z) = segment_last_zero(a, b, t0, span) {
            last = Some(z);
        }
    });
    Ok(last.unwrap_or(0.0))
}

/// Streaming version of both functionals, fed one grid increment at a time.
#[derive(Debug, Clone)]
pub(crate) struct PathTally {
    pub time: f64,
    pub value: f64,
    pub below: f64,
    pub last_zero: f64,
}

impl PathTally {
    pub fn start(value: f64) -> Self {
        Self {
            time: 0.0,
            value,
            below: 0.0,
            last_zero: 0.0,
        }
    }

    pub fn push(&mut self, next: f64, h: f64) {
        self.below += segment_time_below(self.value, next, h);
        if let Some(z) = segment_last_zero(self.value, next, self.time, h) {
            self.last_zero = z;
        }
        self.time += h;
        self.value = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn path(step: f64, values: &[f64]) -> GridPath {
        GridPath::new(step, values.to_vec(), 0.0).unwrap()
    }

    #[test]
    fn rejects_bad_paths() {
        assert!(GridPath::new(0.0, vec![1.0], 0.0).is_err());
        assert!(GridPath::new(1.0, vec![], 0.0).is_err());
        assert!(GridPath::new(1.0, vec![1.0], -1.0).is_err());
    }

    #[test]
    fn occupation_examples() {
        assert_eq!(
            occupation_below_zero(&path(0.5, &[1.0, 2.0, 0.5, 3.0]), 1.5).unwrap(),
            0.0
        );
        assert_eq!(occupation_below_zero(&path(0.5, &[-1.0; 5]), 2.0).unwrap(), 2.0);
        assert_abs_diff_eq!(
            occupation_below_zero(&path(2.0, &[-1.0, 1.0]), 2.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
        let linear: Vec<f64> = (0..=8).map(|k| -1.0 + k as f64 * 0.25).collect();
        assert_abs_diff_eq!(
            occupation_below_zero(&path(0.25, &linear), 2.0).unwrap(),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn horizon_cuts_segments() {
        let p = path(1.0, &[-1.0, -1.0, 1.0]);
        assert_abs_diff_eq!(occupation_below_zero(&p, 0.5).unwrap(), 0.5);
        assert_abs_diff_eq!(occupation_below_zero(&p, 1.5).unwrap(), 1.5);
        assert!(occupation_below_zero(&p, 2.5).is_err());
    }

    #[test]
    fn last_zero_examples() {
        assert_eq!(last_zero(&path(1.0, &[1.0, 2.0, 0.1]), 2.0).unwrap(), 0.0);
        assert_abs_diff_eq!(last_zero(&path(1.0, &[1.0, -1.0]), 1.0).unwrap(), 0.5);
        assert_eq!(last_zero(&path(0.5, &[1.0, 2.0, 0.0]), 1.0).unwrap(), 1.0);
        assert_eq!(last_zero(&path(0.5, &[0.0, 2.0, 1.0]), 1.0).unwrap(), 0.0);
        // the crossing after the horizon is ignored
        assert_eq!(last_zero(&path(1.0, &[1.0, 1.0, -1.0]), 1.2).unwrap(), 0.0);
    }

    proptest! {
        #[test]
        fn streaming_matches_batch(values in proptest::collection::vec(-3.0f64..3.0, 2..60), step in 0.01f64..1.0) {
            let p = path(step, &values);
            let mut tally = PathTally::start(values[0]);
            for &v in &values[1..] {
                tally.push(v, step);
            }
            let horizon = p.duration();
            prop_assert!((tally.below - occupation_below_zero(&p, horizon).unwrap()).abs() < 1e-12);
            prop_assert!((tally.last_zero - last_zero(&p, horizon).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn occupation_bounded_by_horizon(values in proptest::collection::vec(-3.0f64..3.0, 2..60)) {
            let p = path(0.1, &values);
            let h = p.duration();
            let occ = occupation_below_zero(&p, h).unwrap();
            prop_assert!((0.0..=h + 1e-12).contains(&occ));
            let z = last_zero(&p, h).unwrap();
            prop_assert!((0.0..=h + 1e-12).contains(&z));
        }
    }
}
