use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stationary::{EntropyPhase, PhaseProblem};
use crate::error::{Error, Result};
use crate::expsums::{sum_over, IndexSetKind, IndexSetSpec, Weight, DESK_T_MAX};
use crate::kernel_ie::ln_kernel;
use crate::quadrature::{phase_breakpoints, Integrator, QuadResult};
use crate::special_fn::{cis_product, reduced_phase};
use crate::summation::{chunked_sum, NeumaierComplex};
use crate::types::StripPoint;

/// Fresnel widths between a stationary point and an endpoint below which the
/// endpoint formulas are refused.
pub const FRESNEL_WIDTHS: f64 = 3.0;

/// [t^{d2-1}, 1 - t^{d3-1}].
pub fn j3_window(t: f64, d2: f64, d3: f64) -> Result<(f64, f64)> {
    for (name, d) in [("d2", d2), ("d3", d3)] {
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::invalid(format!("{name} = {d} must lie in (0, 1)")));
        }
    }
    let (a, b) = (t.powf(d2 - 1.0), 1.0 - t.powf(d3 - 1.0));
    if !(a < b) {
        return Err(Error::invalid(format!(
            "window ({a}, {b}) is empty at t = {t}"
        )));
    }
    Ok((a, b))
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!(
            "lambda = {lambda} must be positive"
        )));
    }
    Ok(())
}

/// G(sigma, tau) = (1 - tau)^{-1/2} tau^{sigma - 1/2}.
pub fn j3_amplitude(sigma: f64, tau: f64) -> f64 {
    (1.0 - tau).powf(-0.5) * tau.powf(sigma - 0.5)
}

/// F(tau, lambda) = (1 - tau) ln(1 - tau) + tau ln tau + tau ln lambda.
pub fn j3_phase(tau: f64, lambda: f64) -> f64 {
    (1.0 - tau) * (-tau).ln_1p() + tau * (tau * lambda).ln()
}

fn j3_phase_prime(tau: f64, lambda: f64) -> f64 {
    (tau * lambda).ln() - (-tau).ln_1p()
}

pub fn j3_problem(p: StripPoint, d2: f64, d3: f64, lambda: f64) -> Result<PhaseProblem> {
    let window = j3_window(p.t(), d2, d3)?;
    let sigma = p.sigma();
    PhaseProblem::new(
        Arc::new(move |tau| j3_amplitude(sigma, tau)),
        Arc::new(EntropyPhase),
        lambda,
        window,
    )
}

/// (t/pi) int K(sigma, t, tau) lambda^{i tau t} d tau over the window, from
/// the exact log-gamma kernel.
pub fn j3_numeric(p: StripPoint, d2: f64, d3: f64, lambda: f64, tol: f64) -> Result<QuadResult> {
    check_lambda(lambda)?;
    let t = p.t();
    let (a, b) = j3_window(t, d2, d3)?;
    let ln_l = lambda.ln();
    let f = |tau: f64| -> Result<Complex64> {
        let lk = ln_kernel(p, tau)?;
        Ok(lk.exp() * cis_product(t, tau * ln_l) * (t / PI))
    };
    let pts = phase_breakpoints(
        a,
        b,
        |tau| t * j3_phase_prime(tau, lambda).abs() + 1.0,
        FRAC_PI_4,
    );
    let abs = tol * 1e-3 / t;
    Integrator::new(abs)
        .rel_tol(tol)
        .max_subdivisions(50_000 + 4 * pts.len())
        .breakpoints(pts)
        .try_integrate(f, a, b)
}

/// int G(sigma, tau) e^{i t F(tau, lambda)} d tau over the window.
pub fn j3_reduced(p: StripPoint, d2: f64, d3: f64, lambda: f64, tol: f64) -> Result<QuadResult> {
    check_lambda(lambda)?;
    j3_problem(p, d2, d3, lambda)?.integrate(p.t(), tol)
}

/// sqrt(2t/pi) e^{-i pi/4}, the factor between J3 and its reduced form.
pub fn j3_prefactor(t: f64) -> Complex64 {
    Complex64::from_polar((2.0 * t / PI).sqrt(), -FRAC_PI_4)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct J3Stationary {
    pub value: Complex64,
    /// Whether the stationary point 1/(1+lambda) lies inside the window.
    pub applies: bool,
}

impl J3Stationary {
    pub fn effective(&self) -> Complex64 {
        if self.applies {
            self.value
        } else {
            Complex64::new(0.0, 0.0)
        }
    }
}

/// 1/(t^{1-d3} - 1) < lambda < t^{1-d2} - 1.
pub fn j3_stationary_band(t: f64, d2: f64, d3: f64, lambda: f64) -> bool {
    1.0 / (t.powf(1.0 - d3) - 1.0) < lambda && lambda < t.powf(1.0 - d2) - 1.0
}

/// sqrt(2 pi/t) e^{i pi/4} lambda^{it} (1+lambda)^{-sigma-it}.
pub fn j3_s(p: StripPoint, d2: f64, d3: f64, lambda: f64) -> Result<J3Stationary> {
    check_lambda(lambda)?;
    let t = p.t();
    let amp = (2.0 * PI / t).sqrt() * (1.0 + lambda).powf(-p.sigma());
    // ln(lambda/(1+lambda)) = -ln(1 + 1/lambda)
    let value = Complex64::from_polar(amp, FRAC_PI_4) * cis_product(t, -(1.0 / lambda).ln_1p());
    Ok(J3Stationary {
        value,
        applies: j3_stationary_band(t, d2, d3, lambda),
    })
}

/// B(tau) = G e^{itF} / (i t F'), the integration-by-parts boundary term.
pub fn j3_boundary(p: StripPoint, lambda: f64, tau: f64) -> Complex64 {
    let t = p.t();
    let g = Complex64::from_polar(
        j3_amplitude(p.sigma(), tau),
        reduced_phase(t, j3_phase(tau, lambda)),
    );
    g / Complex64::new(0.0, t * j3_phase_prime(tau, lambda))
}

fn check_endpoint(t: f64, lambda: f64, endpoint: f64, which: &str) -> Result<()> {
    let tau1 = 1.0 / (1.0 + lambda);
    let width = FRESNEL_WIDTHS * (t * (1.0 + lambda).powi(2) / lambda).powf(-0.5);
    if (tau1 - endpoint).abs() < width {
        return Err(Error::TransitionZone(format!(
            "stationary point {tau1} within {FRESNEL_WIDTHS} Fresnel widths of the {which} endpoint {endpoint}"
        )));
    }
    Ok(())
}

/// Upper-endpoint term (leading order).
pub fn j3_u(p: StripPoint, d3: f64, lambda: f64) -> Result<Complex64> {
    check_lambda(lambda)?;
    if !(d3 > 0.0 && d3 < 1.0) {
        return Err(Error::invalid(format!("d3 = {d3} must lie in (0, 1)")));
    }
    let t = p.t();
    check_endpoint(t, lambda, 1.0 - t.powf(d3 - 1.0), "upper")?;
    Ok(u_unchecked(p, d3, lambda))
}

/// Lower-endpoint term (leading order).
pub fn j3_l(p: StripPoint, d2: f64, lambda: f64) -> Result<Complex64> {
    check_lambda(lambda)?;
    if !(d2 > 0.0 && d2 < 1.0) {
        return Err(Error::invalid(format!("d2 = {d2} must lie in (0, 1)")));
    }
    let (sigma, t) = (p.sigma(), p.t());
    let eps = t.powf(d2 - 1.0);
    check_endpoint(t, lambda, eps, "lower")?;
    let big_t = t.powf(d2);
    let amp = t.powf(d2 * (sigma - 0.5)) / t.powf(sigma + 0.5) * (1.0 - eps).powf(-0.5);
    let phase = reduced_phase(t - big_t, (-eps).ln_1p())
        + reduced_phase(big_t, lambda.ln() + (d2 - 1.0) * t.ln());
    let den = lambda.ln() - (t.powf(1.0 - d2) - 1.0).ln();
    Ok(Complex64::new(0.0, amp) * Complex64::from_polar(1.0, phase) / den)
}

/// J3 from its two-term representation, prefactor * (J3_S - J3_U).
pub fn j3_asymptotic(p: StripPoint, d2: f64, d3: f64, lambda: f64) -> Result<Complex64> {
    let s = j3_s(p, d2, d3, lambda)?;
    Ok(j3_prefactor(p.t()) * (s.effective() - j3_u(p, d3, lambda)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct I3Parts {
    /// 2 Re S_M, the stationary-point sum.
    pub stationary: f64,
    /// The upper-endpoint sum, entering with a minus sign.
    pub upper: f64,
    pub total: f64,
    /// Pairs of the M_r band left out of the endpoint sum.
    pub excluded_pairs: u64,
    pub pairs: u64,
}

fn check_desk(t: f64) -> Result<()> {
    if t > DESK_T_MAX {
        return Err(Error::DeskScaleExceeded(format!(
            "t = {t} exceeds {DESK_T_MAX} for a full double sum"
        )));
    }
    Ok(())
}

/// Leading-order assembly of I3 from S_M and the upper-endpoint double sum
/// over the square minus the M_r band; the transition-zone part is omitted.
pub fn i3_tilde(p: StripPoint, d2: f64, d3: f64) -> Result<I3Parts> {
    let (sigma, t) = (p.sigma(), p.t());
    check_desk(t)?;
    j3_window(t, d2, d3)?;
    let s_m = sum_over(
        &IndexSetSpec::new(IndexSetKind::M { d2, d3 }, t)?,
        Weight::Sm,
        p,
    );
    let mr = IndexSetSpec::new(IndexSetKind::Mr { d3, c: 1.0 }, t)?;
    let n = mr.n();
    let big_t = t.powf(d3);
    let eps = t.powf(d3 - 1.0);
    let ln_band = (t.powf(1.0 - d3) - 1.0).ln();
    let logs: Vec<f64> = (0..=n).map(|m| (m.max(1) as f64).ln()).collect();
    let excluded = std::sync::atomic::AtomicU64::new(0);
    let acc = chunked_sum(n, 16, true, |i, acc: &mut NeumaierComplex| {
        let m1 = i + 1;
        for m2 in 1..=n {
            if mr.contains(m1, m2) {
                excluded.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                continue;
            }
            let l = logs[m2] - logs[m1];
            let w = (-sigma * (logs[m1] + logs[m2])).exp() / (l + ln_band);
            acc.add(Complex64::from_polar(w, reduced_phase(t - big_t, l)));
        }
    });
    let c = Complex64::from_polar(
        t.powf(-0.5 * d3) * (1.0 - eps).powf(sigma - 0.5),
        FRAC_PI_4
            + reduced_phase(t - big_t, (-eps).ln_1p())
            + reduced_phase(big_t, (d3 - 1.0) * t.ln()),
    );
    let upper = (2.0 / PI).sqrt() * (c * acc.value()).re;
    let stationary = 2.0 * s_m.value.re;
    let excluded_pairs = excluded.into_inner();
    Ok(I3Parts {
        stationary,
        upper,
        total: stationary - upper,
        excluded_pairs,
        pairs: (n * n) as u64,
    })
}

/// (t/pi) int Re K(sigma, t, tau) |sum_{m <= [t]} m^{-sigma - i tau t}|^2 d tau
/// over the window: the defining double sum of Re J3 collapsed to one
/// integral.
pub fn i3_direct(p: StripPoint, d2: f64, d3: f64, tol: f64) -> Result<QuadResult> {
    let (sigma, t) = (p.sigma(), p.t());
    check_desk(t)?;
    let (a, b) = j3_window(t, d2, d3)?;
    let n = p.floor_t().max(1);
    let terms: Vec<(f64, f64)> = (1..=n)
        .map(|m| ((m as f64).powf(-sigma), (m as f64).ln()))
        .collect();
    let ln_n = (n as f64).ln();
    let f = |tau: f64| -> Result<Complex64> {
        let k = ln_kernel(p, tau)?.exp();
        let mut z = NeumaierComplex::default();
        for &(w, l) in &terms {
            z.add(Complex64::from_polar(w, -reduced_phase(t, tau * l)));
        }
        Ok(Complex64::new(t / PI * k.re * z.value().norm_sqr(), 0.0))
    };
    let pts = phase_breakpoints(
        a,
        b,
        |tau| t * (j3_phase_prime(tau, 1.0).abs() + 2.0 * ln_n) + 1.0,
        FRAC_PI_4,
    );
    Integrator::new(tol * 1e-3)
        .rel_tol(tol)
        .max_subdivisions(50_000 + 4 * pts.len())
        .breakpoints(pts)
        .try_integrate(f, a, b)
}

/// Error of the leading-order representation for one pair (m1, m2).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairError {
    pub m1: usize,
    pub m2: usize,
    pub in_mr_band: bool,
    /// (m1 m2)^{-sigma} Re J3, by quadrature.
    pub numeric: f64,
    /// The same from the assembly's per-pair term.
    pub asymptotic: f64,
}

impl PairError {
    pub fn abs_err(&self) -> f64 {
        (self.numeric - self.asymptotic).abs()
    }
}

/// Per-pair attribution of the gap between I3 and its leading-order assembly.
pub fn i3_pair_errors(p: StripPoint, d2: f64, d3: f64, tol: f64) -> Result<Vec<PairError>> {
    let (sigma, t) = (p.sigma(), p.t());
    check_desk(t)?;
    j3_window(t, d2, d3)?;
    let mr = IndexSetSpec::new(IndexSetKind::Mr { d3, c: 1.0 }, t)?;
    let n = mr.n();
    let pairs: Vec<(usize, usize)> = (1..=n)
        .flat_map(|m1| (1..=n).map(move |m2| (m1, m2)))
        .collect();
    let pre = j3_prefactor(t);
    pairs
        .par_iter()
        .map(|&(m1, m2)| {
            let lambda = m2 as f64 / m1 as f64;
            let w = ((m1 * m2) as f64).powf(-sigma);
            let in_band = mr.contains(m1, m2);
            let s = j3_s(p, d2, d3, lambda)?.effective();
            let u = if in_band {
                Complex64::new(0.0, 0.0)
            } else {
                u_unchecked(p, d3, lambda)
            };
            let numeric = w * j3_numeric(p, d2, d3, lambda, tol)?.value.re;
            Ok(PairError {
                m1,
                m2,
                in_mr_band: in_band,
                numeric,
                asymptotic: w * (pre * (s - u)).re,
            })
        })
        .collect()
}

fn u_unchecked(p: StripPoint, d3: f64, lambda: f64) -> Complex64 {
    let (sigma, t) = (p.sigma(), p.t());
    let eps = t.powf(d3 - 1.0);
    let big_t = t.powf(d3);
    let amp = t.powf(-0.5 * d3 - 0.5) * (1.0 - eps).powf(sigma - 0.5);
    let phase = reduced_phase(big_t, (d3 - 1.0) * t.ln())
        + reduced_phase(t - big_t, (-eps).ln_1p() + lambda.ln());
    let den = lambda.ln() + (t.powf(1.0 - d3) - 1.0).ln();
    Complex64::new(0.0, amp) * Complex64::from_polar(1.0, phase) / den
}
