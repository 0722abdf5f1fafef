use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{phase_breakpoints, Integrator, QuadResult};
use crate::special_fn::reduced_phase;

/// A real phase f(tau) with its first two derivatives.
pub trait PhaseFunction: Send + Sync {
    fn name(&self) -> &'static str;
    fn f(&self, tau: f64) -> f64;
    fn df(&self, tau: f64) -> f64;
    fn d2f(&self, tau: f64) -> f64;
}

/// (1 - tau) ln(1 - tau) + tau ln tau on (0, 1).
#[derive(Debug, Clone, Copy, Default)]
pub struct EntropyPhase;

impl PhaseFunction for EntropyPhase {
    fn name(&self) -> &'static str {
        "entropy"
    }
    fn f(&self, tau: f64) -> f64 {
        (1.0 - tau) * (-tau).ln_1p() + tau * tau.ln()
    }
    fn df(&self, tau: f64) -> f64 {
        tau.ln() - (-tau).ln_1p()
    }
    fn d2f(&self, tau: f64) -> f64 {
        1.0 / (tau * (1.0 - tau))
    }
}

/// tau - tau ln tau on (0, inf).
#[derive(Debug, Clone, Copy, Default)]
pub struct LinearLogPhase;

impl PhaseFunction for LinearLogPhase {
    fn name(&self) -> &'static str {
        "linear-log"
    }
    fn f(&self, tau: f64) -> f64 {
        tau - tau * tau.ln()
    }
    fn df(&self, tau: f64) -> f64 {
        -tau.ln()
    }
    fn d2f(&self, tau: f64) -> f64 {
        -1.0 / tau
    }
}

/// (tau - centre)^2 / 2.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadraticPhase {
    pub centre: f64,
}

impl PhaseFunction for QuadraticPhase {
    fn name(&self) -> &'static str {
        "quadratic"
    }
    fn f(&self, tau: f64) -> f64 {
        0.5 * (tau - self.centre).powi(2)
    }
    fn df(&self, tau: f64) -> f64 {
        tau - self.centre
    }
    fn d2f(&self, _tau: f64) -> f64 {
        1.0
    }
}

pub fn phase_function_names() -> Vec<&'static str> {
    vec!["entropy", "linear-log", "quadratic"]
}

pub fn phase_function(name: &str) -> Result<Arc<dyn PhaseFunction>> {
    match name {
        "entropy" => Ok(Arc::new(EntropyPhase)),
        "linear-log" => Ok(Arc::new(LinearLogPhase)),
        "quadratic" => Ok(Arc::new(QuadraticPhase::default())),
        _ => Err(Error::invalid(format!(
            "unknown phase function '{name}', expected one of {:?}",
            phase_function_names()
        ))),
    }
}

pub type Amplitude = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// int_a^b g(tau) e^{i t F(tau)} d tau with F = f + tau ln(lambda).
#[derive(Clone)]
pub struct PhaseProblem {
    pub amplitude: Amplitude,
    pub phase: Arc<dyn PhaseFunction>,
    pub lambda: f64,
    pub window: (f64, f64),
}

impl std::fmt::Debug for PhaseProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "PhaseProblem({}, lambda={}, window={:?})",
            self.phase.name(),
            self.lambda,
            self.window
        )
    }
}

/// Leading stationary-phase value and the two integration-by-parts
/// boundary terms B(a), B(b), where B = g e^{itF} / (i t F').
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpEstimate {
    pub tau1: f64,
    pub leading: Complex64,
    pub lower: Complex64,
    pub upper: Complex64,
}

impl SpEstimate {
    pub fn with_endpoints(&self) -> Complex64 {
        self.leading + self.upper - self.lower
    }
}

impl PhaseProblem {
    pub fn new(
        amplitude: Amplitude,
        phase: Arc<dyn PhaseFunction>,
        lambda: f64,
        window: (f64, f64),
    ) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "lambda = {lambda} must be positive"
            )));
        }
        let (a, b) = window;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::invalid(format!(
                "window ({a}, {b}) must be a finite interval"
            )));
        }
        Ok(Self {
            amplitude,
            phase,
            lambda,
            window,
        })
    }

    pub fn big_f(&self, tau: f64) -> f64 {
        self.phase.f(tau) + tau * self.lambda.ln()
    }

    pub fn big_f_prime(&self, tau: f64) -> f64 {
        self.phase.df(tau) + self.lambda.ln()
    }

    /// Root of F' in the window, by bisection; None without a sign change.
    pub fn stationary_point(&self) -> Option<f64> {
        let (mut lo, mut hi) = self.window;
        let (flo, fhi) = (self.big_f_prime(lo), self.big_f_prime(hi));
        if flo == 0.0 {
            return Some(lo);
        }
        if fhi == 0.0 {
            return Some(hi);
        }
        if flo.signum() == fhi.signum() {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let fm = self.big_f_prime(mid);
            if fm == 0.0 {
                return Some(mid);
            }
            if fm.signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    }

    pub fn integrand(&self, t: f64, tau: f64) -> Complex64 {
        Complex64::from_polar((self.amplitude)(tau), reduced_phase(t, self.big_f(tau)))
    }

    pub fn boundary_term(&self, t: f64, tau: f64) -> Complex64 {
        self.integrand(t, tau) / Complex64::new(0.0, t * self.big_f_prime(tau))
    }

    /// Direct quadrature with panels carrying at most pi/4 of phase.
    pub fn integrate(&self, t: f64, tol: f64) -> Result<QuadResult> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        let (a, b) = self.window;
        let gmax = [a, 0.5 * (a + b), b]
            .iter()
            .map(|&x| (self.amplitude)(x).abs())
            .fold(0.0, f64::max);
        let abs = tol * 1e-3 * gmax.max(1e-300) * (b - a) / t.max(1.0);
        let pts = phase_breakpoints(a, b, |x| t * self.big_f_prime(x).abs() + 1.0, FRAC_PI_4);
        Integrator::new(abs)
            .rel_tol(tol)
            .max_subdivisions(50_000 + 4 * pts.len())
            .breakpoints(pts)
            .integrate(|x| self.integrand(t, x), a, b)
    }
}

/// sqrt(2 pi / (t |f''|)) g(tau1) e^{i t F(tau1) + i pi/4 sgn f''} with the
/// endpoint terms B(a), B(b) alongside.
pub fn stationary_phase_generic(prob: &PhaseProblem, t: f64) -> Result<SpEstimate> {
    let (a, b) = prob.window;
    let tau1 = prob
        .stationary_point()
        .ok_or(Error::NoStationaryPoint(a, b))?;
    let f2 = prob.phase.d2f(tau1);
    if f2 == 0.0 || !f2.is_finite() {
        return Err(Error::invalid(format!(
            "degenerate stationary point at tau = {tau1}"
        )));
    }
    let amp = (2.0 * PI / (t * f2.abs())).sqrt() * (prob.amplitude)(tau1);
    let leading = Complex64::from_polar(
        amp,
        reduced_phase(t, prob.big_f(tau1)) + FRAC_PI_4 * f2.signum(),
    );
    Ok(SpEstimate {
        tau1,
        leading,
        lower: prob.boundary_term(t, a),
        upper: prob.boundary_term(t, b),
    })
}
