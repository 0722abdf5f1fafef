use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// A point `s = sigma + i t` of the critical strip with `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripPoint {
    sigma: f64,
    t: f64,
}

impl StripPoint {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::invalid(format!(
                "sigma = {sigma} must lie in (0, 1)"
            )));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::invalid(format!(
                "t = {t} must be positive and finite"
            )));
        }
        Ok(Self { sigma, t })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(self.sigma, self.t)
    }

    pub fn on_critical_line(&self) -> bool {
        self.sigma == 0.5
    }

    /// `[t]`, the integer part of the height.
    pub fn floor_t(&self) -> usize {
        self.t.floor() as usize
    }
}

/// Two sides of an identity and their discrepancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl ResidualReport {
    pub fn new(lhs: Complex64, rhs: Complex64) -> Self {
        let abs_err = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel_err = if scale > 0.0 {
            abs_err / scale
        } else {
            abs_err
        };
        Self {
            lhs,
            rhs,
            abs_err,
            rel_err,
        }
    }

    pub fn real(lhs: f64, rhs: f64) -> Self {
        Self::new(Complex64::new(lhs, 0.0), Complex64::new(rhs, 0.0))
    }

    pub fn within(&self, tol: f64) -> bool {
        self.rel_err <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strip_point_rejects_outside_strip() {
        assert!(StripPoint::new(0.0, 1.0).is_err());
        assert!(StripPoint::new(1.0, 1.0).is_err());
        assert!(StripPoint::new(0.5, -1.0).is_err());
        assert!(StripPoint::new(0.5, f64::NAN).is_err());
        let p = StripPoint::new(0.25, 10.7).unwrap();
        assert_eq!(p.floor_t(), 10);
    }

    #[test]
    fn residual_relative_uses_larger_side() {
        let r = ResidualReport::real(2.0, 1.0);
        assert_eq!(r.abs_err, 1.0);
        assert_eq!(r.rel_err, 0.5);
        let z = ResidualReport::real(0.0, 0.0);
        assert_eq!(z.rel_err, 0.0);
    }
}
