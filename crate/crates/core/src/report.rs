//! Named numerical checks with thresholds, shared by every verification routine.

use rayon::prelude::*;
use serde::Serialize;

/// Which side of the threshold passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// pass iff `max_residual ≤ threshold`
    Upper,
    /// pass iff `max_residual > threshold`; the field then holds an observed minimum
    Lower,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub max_residual: f64,
    pub threshold: f64,
    pub pass: bool,
    pub bound: Bound,
}

impl Check {
    pub fn at_most(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            max_residual: residual,
            threshold,
            pass: residual <= threshold,
            bound: Bound::Upper,
        }
    }

    pub fn above(name: impl Into<String>, value: f64, floor: f64) -> Self {
        Check {
            name: name.into(),
            max_residual: value,
            threshold: floor,
            pass: value > floor,
            bound: Bound::Lower,
        }
    }

    /// A boolean fact, reported as residual 0 (holds) or 1 (fails).
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::at_most(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Max-reduction where NaN counts as an infinite residual.
pub fn worst(a: f64, b: f64) -> f64 {
    let clean = |v: f64| if v.is_nan() { f64::INFINITY } else { v };
    clean(a).max(clean(b))
}

/// Largest residual over the items, computed in parallel; errors count as ∞.
pub fn par_max<T: Sync>(items: &[T], f: impl Fn(&T) -> crate::Result<f64> + Sync) -> f64 {
    items
        .par_iter()
        .map(|it| f(it).unwrap_or(f64::INFINITY))
        .reduce(|| 0.0, worst)
}

/// Smallest value over the items, computed in parallel; errors and NaN count as −∞.
pub fn par_min<T: Sync>(items: &[T], f: impl Fn(&T) -> crate::Result<f64> + Sync) -> f64 {
    items
        .par_iter()
        .map(|it| match f(it) {
            Ok(v) if !v.is_nan() => v,
            _ => f64::NEG_INFINITY,
        })
        .reduce(|| f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_fails_both_bounds() {
        assert!(!Check::at_most("x", f64::NAN, 1.0).pass);
        assert!(!Check::above("x", f64::NAN, 1.0).pass);
        assert_eq!(worst(f64::NAN, 1.0), f64::INFINITY);
    }

    #[test]
    fn parallel_reductions() {
        let xs: Vec<f64> = (0..100).map(f64::from).collect();
        assert_eq!(par_max(&xs, |&x| Ok(x)), 99.0);
        assert_eq!(par_min(&xs, |&x| Ok(x)), 0.0);
        assert_eq!(
            par_max(&xs, |&x| if x > 50.0 {
                Err(crate::Error::input("e"))
            } else {
                Ok(x)
            }),
            f64::INFINITY
        );
        let mut r = Report::new();
        r.push(Check::holds("a", true));
        assert!(r.pass());
        r.push(Check::above("b", 0.01, 0.05));
        assert!(!r.pass());
        assert_eq!(r.failures().count(), 1);
    }
}
