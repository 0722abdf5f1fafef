use num_complex::Complex64;

use super::{Integrator, QuadResult, RealFn};
use crate::error::{Error, Result};

/// A rule for the Cauchy principal value of an integral with a simple pole
/// at an interior point `c`.
pub trait PvRule: Send + Sync {
    fn name(&self) -> &'static str;
    fn integrate(
        &self,
        integ: &Integrator,
        f: RealFn<'_>,
        a: f64,
        b: f64,
        c: f64,
    ) -> Result<QuadResult>;
}

fn check_bounds(a: f64, b: f64, c: f64) -> Result<()> {
    if !(a < c && c < b) {
        return Err(Error::invalid(format!(
            "need a < c < b, got a={a}, c={c}, b={b}"
        )));
    }
    Ok(())
}

/// Pairs `f(c+u) + f(c-u)` on `u in (0, h)`, `h = min(c-a, b-c)`, and
/// integrates the leftover one-sided piece plainly.
#[derive(Debug, Clone, Copy, Default)]
pub struct SymmetricPairing;

impl PvRule for SymmetricPairing {
    fn name(&self) -> &'static str {
        "pairing"
    }

    fn integrate(
        &self,
        integ: &Integrator,
        f: RealFn<'_>,
        a: f64,
        b: f64,
        c: f64,
    ) -> Result<QuadResult> {
        check_bounds(a, b, c)?;
        let h = (c - a).min(b - c);
        let paired = |u: f64| f(c + u) + f(c - u);
        let near = paired(1e-9 * h).norm();
        let far = paired(1e-7 * h).norm();
        if near.is_finite() && far.is_finite() && near > 50.0 * far.max(1e-300) && near > 1e-6 {
            return Err(Error::PvDivergence(c));
        }
        if !near.is_finite() {
            return Err(Error::PvDivergence(c));
        }
        let paired_integ = Integrator {
            breakpoints: integ
                .breakpoints
                .iter()
                .map(|x| (x - c).abs())
                .filter(|&u| u > 0.0 && u < h)
                .collect(),
            ..integ.clone()
        };
        let mut r = paired_integ.integrate_dyn(&paired, 0.0, h)?;
        if c - a > h {
            r = r.combine(&integ.integrate_dyn(f, a, c - h)?);
        } else if b - c > h {
            r = r.combine(&integ.integrate_dyn(f, c + h, b)?);
        }
        Ok(r)
    }
}

/// Subtracts `R/(x-c)` and adds its principal value `R ln((b-c)/(c-a))`.
/// The residue is estimated from the integrand when not supplied.
#[derive(Debug, Clone, Copy, Default)]
pub struct PoleSubtraction {
    pub residue: Option<Complex64>,
}

impl PoleSubtraction {
    pub fn estimate_residue(f: RealFn<'_>, c: f64, h: f64) -> Complex64 {
        // u (f(c+u) - f(c-u)) / 2 = R + O(u^2); one Richardson step
        let r = |u: f64| (f(c + u) - f(c - u)) * (0.5 * u);
        let u = 1e-3 * h;
        (r(u) * 4.0 - r(2.0 * u)) / 3.0
    }
}

impl PvRule for PoleSubtraction {
    fn name(&self) -> &'static str {
        "subtraction"
    }

    fn integrate(
        &self,
        integ: &Integrator,
        f: RealFn<'_>,
        a: f64,
        b: f64,
        c: f64,
    ) -> Result<QuadResult> {
        check_bounds(a, b, c)?;
        let res = self
            .residue
            .unwrap_or_else(|| Self::estimate_residue(f, c, (c - a).min(b - c)));
        let g = |x: f64| f(x) - res / (x - c);
        let split = Integrator {
            breakpoints: [integ.breakpoints.clone(), vec![c]].concat(),
            min_width: integ.min_width.max(1e-9 * (b - a)),
            ..integ.clone()
        };
        let r = split.integrate_dyn(&g, a, b)?;
        Ok(QuadResult {
            value: r.value + res * ((b - c) / (c - a)).ln(),
            ..r
        })
    }
}

/// Principal value with the default pairing rule.
pub fn integrate_pv<F>(f: F, a: f64, b: f64, c: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    SymmetricPairing.integrate(&Integrator::new(tol), &f, a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::LN_2;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn odd_pole_vanishes() {
        let c = 0.3;
        let r = integrate_pv(|x| re(1.0 / (x - c)), c - 1.0, c + 1.0, c, 1e-12).unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn log_two() {
        let r = integrate_pv(|x| re(1.0 / x), -1.0, 2.0, 0.0, 1e-12).unwrap();
        assert_relative_eq!(r.value.re, LN_2, epsilon = 1e-12);
        let s = PoleSubtraction::default()
            .integrate(&Integrator::new(1e-12), &|x| re(1.0 / x), -1.0, 2.0, 0.0)
            .unwrap();
        assert_relative_eq!(s.value.re, LN_2, epsilon = 1e-9);
    }

    #[test]
    fn rules_agree_on_shifted_pole() {
        let f = |x: f64| Complex64::new(x.cos(), x * x).exp() / (x - 0.4);
        let integ = Integrator::new(1e-12);
        let p = SymmetricPairing
            .integrate(&integ, &f, -1.0, 2.0, 0.4)
            .unwrap();
        let s = PoleSubtraction::default()
            .integrate(&integ, &f, -1.0, 2.0, 0.4)
            .unwrap();
        assert!(
            (p.value - s.value).norm() < 1e-8,
            "{} vs {}",
            p.value,
            s.value
        );
    }

    #[test]
    fn continuous_integrand_reduces_to_plain() {
        let f = |x: f64| re((3.0 * x).sin() + x * x);
        let pv = integrate_pv(f, -0.5, 1.5, 0.2, 1e-13).unwrap();
        let plain = super::super::integrate(f, -0.5, 1.5, 1e-13).unwrap();
        assert_relative_eq!(pv.value.re, plain.value.re, max_relative = 1e-10);
    }

    #[test]
    fn double_pole_is_rejected() {
        let r = integrate_pv(|x| re(1.0 / (x * x)), -1.0, 1.0, 0.0, 1e-8);
        assert!(matches!(r, Err(Error::PvDivergence(_))));
    }
}
