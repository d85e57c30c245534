use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute floor for relative comparisons of values near zero.
pub const ABS_FLOOR: f64 = 1e-12;

/// Numerical slack used throughout the library.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Membership slack.
    pub mem_eps: f64,
    /// Relative equality.
    pub eq_rtol: f64,
    /// Finite-difference step (relative to the order-unit norm of the base point).
    pub fd_step: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            mem_eps: 1e-9,
            eq_rtol: 1e-7,
            fd_step: 1e-5,
        }
    }
}

impl Tolerance {
    pub fn new(mem_eps: f64, eq_rtol: f64, fd_step: f64) -> Result<Self> {
        let tol = Tolerance {
            mem_eps,
            eq_rtol,
            fd_step,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let all_positive = [self.mem_eps, self.eq_rtol, self.fd_step]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if !all_positive {
            return Err(Error::input(
                "tolerances must be finite and strictly positive",
            ));
        }
        // finite-difference probes must move further than the membership slack
        if self.fd_step <= self.mem_eps {
            return Err(Error::input("fd_step must exceed mem_eps"));
        }
        Ok(())
    }

    pub fn with_eq_rtol(mut self, eq_rtol: f64) -> Self {
        self.eq_rtol = eq_rtol;
        self
    }
}

/// Relative discrepancy between two reals, zero when they agree to [`ABS_FLOOR`].
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a.is_infinite() || b.is_infinite() || a.is_nan() || b.is_nan() {
        return f64::INFINITY;
    }
    let d = (a - b).abs();
    if d <= ABS_FLOOR {
        return 0.0;
    }
    d / a.abs().max(b.abs())
}

pub fn rel_close(a: f64, b: f64, rtol: f64) -> bool {
    rel_diff(a, b) <= rtol
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Tolerance::default().validate().unwrap();
    }

    #[test]
    fn rejects_non_positive() {
        assert!(Tolerance::new(0.0, 1e-7, 1e-5).is_err());
        assert!(Tolerance::new(1e-9, -1.0, 1e-5).is_err());
        assert!(Tolerance::new(1e-3, 1e-7, 1e-5).is_err());
    }

    #[test]
    fn relative_difference() {
        assert_eq!(rel_diff(1.0, 1.0), 0.0);
        assert!((rel_diff(2.0, 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(rel_diff(1e-14, -1e-14), 0.0);
        assert_eq!(rel_diff(f64::INFINITY, 1.0), f64::INFINITY);
        assert_eq!(rel_diff(f64::INFINITY, f64::INFINITY), 0.0);
    }
}
