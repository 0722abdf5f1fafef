//! Adaptive Gauss-Kronrod quadrature, principal values and contour integrals.

mod contour;
mod gk;
mod pv;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_4;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use contour::{
    hankel, integrate_contour, integrate_contour_branch, ContourPath, PathPoint, Segment,
};
pub use pv::{integrate_pv, PoleSubtraction, PvRule, SymmetricPairing};

use crate::error::{Error, Result};
use crate::summation::NeumaierComplex;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_error: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        Self {
            value: Complex64::new(0.0, 0.0),
            abs_error: 0.0,
            evaluations: 0,
        }
    }

    pub fn combine(&self, other: &QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            abs_error: self.abs_error + other.abs_error,
            evaluations: self.evaluations + other.evaluations,
        }
    }

    pub fn scale(&self, k: Complex64) -> QuadResult {
        QuadResult {
            value: self.value * k,
            abs_error: self.abs_error * k.norm(),
            evaluations: self.evaluations,
        }
    }
}

pub type RealFn<'a> = &'a (dyn Fn(f64) -> Complex64 + Sync);

/// Adaptive integrator configuration.
#[derive(Debug, Clone)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    pub phase_bound: Option<f64>,
    pub breakpoints: Vec<f64>,
    /// Panels narrower than this are not split further; their error counts
    /// toward the reported estimate but not toward the stopping test.
    pub min_width: f64,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-14,
            max_subdivisions: 4000,
            phase_bound: None,
            breakpoints: Vec::new(),
            min_width: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

impl Integrator {
    pub fn new(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    pub fn rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    /// Bound on |d(phase)/dx| of the integrand; above 50 the interval is
    /// pre-split so each panel carries at most pi/4 of phase.
    pub fn phase_bound(mut self, bound: f64) -> Self {
        self.phase_bound = Some(bound);
        self
    }

    pub fn min_width(mut self, w: f64) -> Self {
        self.min_width = w;
        self
    }

    pub fn breakpoints(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(points);
        self
    }

    fn initial_panels(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let mut pts: Vec<f64> = vec![a, b];
        pts.extend(self.breakpoints.iter().copied().filter(|&x| x > a && x < b));
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut panels = Vec::with_capacity(pts.len());
        for w in pts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let pieces = match self.phase_bound {
                Some(r) if r > 50.0 => ((hi - lo) * r / FRAC_PI_4).ceil().max(1.0) as usize,
                _ => 1,
            };
            let h = (hi - lo) / pieces as f64;
            for k in 0..pieces {
                let x0 = lo + h * k as f64;
                let x1 = if k + 1 == pieces {
                    hi
                } else {
                    lo + h * (k + 1) as f64
                };
                panels.push((x0, x1));
            }
        }
        panels
    }

    pub fn integrate<F>(&self, f: F, a: f64, b: f64) -> Result<QuadResult>
    where
        F: Fn(f64) -> Complex64 + Sync,
    {
        self.integrate_dyn(&f, a, b)
    }

    /// Like `integrate`, for integrands that can fail; the first error raised
    /// by the integrand is returned in place of the quadrature result.
    pub fn try_integrate<F>(&self, f: F, a: f64, b: f64) -> Result<QuadResult>
    where
        F: Fn(f64) -> Result<Complex64> + Sync,
    {
        let failure: OnceLock<Error> = OnceLock::new();
        let g = |x: f64| match f(x) {
            Ok(v) => v,
            Err(e) => {
                let _ = failure.set(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        };
        let r = self.integrate_dyn(&g, a, b);
        match failure.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }

    pub fn integrate_dyn(&self, f: RealFn<'_>, a: f64, b: f64) -> Result<QuadResult> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::invalid(format!(
                "integration limits must be finite: [{a}, {b}]"
            )));
        }
        if a == b {
            return Ok(QuadResult {
                evaluations: 1,
                ..QuadResult::zero()
            });
        }
        if a > b {
            let r = self.integrate_dyn(f, b, a)?;
            return Ok(QuadResult {
                value: -r.value,
                ..r
            });
        }
        let mut heap = BinaryHeap::new();
        let mut evaluations = 0usize;
        let mut total = Complex64::new(0.0, 0.0);
        let mut total_err = 0.0;
        for (lo, hi) in self.initial_panels(a, b) {
            let (value, err) = gk::gk15(f, lo, hi);
            evaluations += 15;
            total += value;
            total_err += err;
            heap.push(Panel {
                a: lo,
                b: hi,
                value,
                err,
            });
        }
        let limit = self.max_subdivisions + heap.len();
        let target = |v: Complex64| self.abs_tol.max(self.rel_tol * v.norm());
        let mut frozen: Vec<Panel> = Vec::new();
        let mut frozen_err = 0.0;
        while total_err - frozen_err > target(total) {
            if heap.len() + frozen.len() >= limit {
                heap.extend(frozen);
                return Err(Error::NonConvergence {
                    best: finish(heap, evaluations),
                });
            }
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if worst.b - worst.a <= self.min_width || !(mid > worst.a && mid < worst.b) {
                frozen_err += worst.err;
                frozen.push(worst);
                continue;
            }
            let (v1, e1) = gk::gk15(f, worst.a, mid);
            let (v2, e2) = gk::gk15(f, mid, worst.b);
            evaluations += 30;
            total += v1 + v2 - worst.value;
            total_err += e1 + e2 - worst.err;
            heap.push(Panel {
                a: worst.a,
                b: mid,
                value: v1,
                err: e1,
            });
            heap.push(Panel {
                a: mid,
                b: worst.b,
                value: v2,
                err: e2,
            });
            if !total.re.is_finite() || !total.im.is_finite() {
                return Err(Error::invalid("integrand produced a non-finite value"));
            }
        }
        heap.extend(frozen);
        Ok(finish(heap, evaluations))
    }
}

fn finish(heap: BinaryHeap<Panel>, evaluations: usize) -> QuadResult {
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut acc = NeumaierComplex::default();
    let mut err = 0.0;
    for p in &panels {
        acc.add(p.value);
        err += p.err;
    }
    QuadResult {
        value: acc.value(),
        abs_error: err,
        evaluations: evaluations.max(1),
    }
}

/// Plain adaptive integration to an absolute tolerance.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    Integrator::new(tol).integrate(f, a, b)
}

/// Breakpoints for an integrand whose local phase rate is `rate(x)`, so that
/// every panel carries at most `budget` radians of phase.
pub fn phase_breakpoints(a: f64, b: f64, rate: impl Fn(f64) -> f64, budget: f64) -> Vec<f64> {
    let mut pts = vec![a];
    let mut x = a;
    let min_step = (b - a) * 1e-9;
    while x < b {
        let r = rate(x).abs();
        let mut step = if r > 0.0 { budget / r } else { b - x };
        // look ahead so that a sharply rising rate does not overshoot
        let r2 = rate((x + step).min(b)).abs();
        if r2 > r {
            step = budget / r2;
        }
        x = (x + step.max(min_step)).min(b);
        pts.push(x);
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constant() {
        let r = integrate(|_| re(1.0), 0.0, 1.0, 1e-15).unwrap();
        assert!((r.value - 1.0).norm() <= 1e-15);
        assert!(r.evaluations >= 1 && r.abs_error >= 0.0);
    }

    #[test]
    fn oscillatory_exponential() {
        let f = |x: f64| Complex64::new(0.0, 40.0 * x).exp();
        let r = integrate(f, 0.0, PI, 1e-12).unwrap();
        let want = (Complex64::new(0.0, 40.0 * PI).exp() - 1.0) / Complex64::new(0.0, 40.0);
        assert!((r.value - want).norm() < 1e-12);
        let split = Integrator::new(1e-12)
            .phase_bound(60.0)
            .integrate(f, 0.0, PI)
            .unwrap();
        assert!((split.value - want).norm() < 1e-12);
    }

    #[test]
    fn endpoint_weight() {
        // x^0 (1-x)^{-1/2} has antiderivative -2 sqrt(1-x)
        let r = integrate(|x| re((1.0 - x).powf(-0.5)), 0.01, 0.99, 1e-12).unwrap();
        let want = 2.0 * (0.99f64.sqrt() - 0.01f64.sqrt());
        assert_relative_eq!(r.value.re, want, max_relative = 1e-12);
    }

    #[test]
    fn reports_non_convergence_with_estimate() {
        let f = |x: f64| re((1.0 / x).sin() / x);
        match Integrator::new(1e-14)
            .max_subdivisions(20)
            .integrate(f, 1e-6, 1.0)
        {
            Err(Error::NonConvergence { best }) => assert!(best.evaluations > 0),
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn phase_breakpoints_cover_interval() {
        let pts = phase_breakpoints(0.0, 2.0, |x| 100.0 * (1.0 + x), FRAC_PI_4);
        assert_eq!(pts[0], 0.0);
        assert_eq!(*pts.last().unwrap(), 2.0);
        for w in pts.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            assert!((w[1] - w[0]) * 100.0 * (1.0 + mid) <= FRAC_PI_4 * 1.01);
        }
    }

    proptest! {
        #[test]
        fn polynomials_are_exact(coeffs in proptest::collection::vec(-5.0f64..5.0, 11), a in -3.0f64..0.0, len in 0.1f64..4.0) {
            let b = a + len;
            let p = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
            let anti = |x: f64| coeffs.iter().enumerate().rev().fold(0.0, |acc, (k, c)| acc * x + c / (k + 1) as f64) * x;
            let r = integrate(|x| re(p(x)), a, b, 1e-13).unwrap();
            let want = anti(b) - anti(a);
            let scale = coeffs.iter().map(|c| c.abs()).sum::<f64>() * 4f64.powi(11) * len;
            prop_assert!((r.value.re - want).abs() <= 1e-13 * scale.max(1.0));
        }
    }
}
