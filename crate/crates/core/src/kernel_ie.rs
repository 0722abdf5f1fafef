//! The kernel K(sigma, t, tau), the forcing term G(sigma, t) and the windowed
//! integral equation satisfied by |zeta(sigma + i tau t)|^2.

use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use dashmap::DashMap;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{phase_breakpoints, Integrator, QuadResult};
use crate::special_fn::{
    digamma, gamma_real, ln_gamma_diff, log_gamma, zeta, EulerMaclaurin, ZetaEvaluator, EULER_GAMMA,
};
use crate::types::{ResidualReport, StripPoint};

/// Exponents of the window cut-offs t^{d_j - 1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaWindow {
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
}

impl DeltaWindow {
    pub fn new(d1: f64, d2: f64, d3: f64, d4: f64) -> Result<Self> {
        for (name, d) in [("d1", d1), ("d2", d2), ("d3", d3), ("d4", d4)] {
            if !(d > 0.0 && d < 1.0) {
                return Err(Error::invalid(format!("{name} = {d} must lie in (0, 1)")));
            }
        }
        Ok(Self { d1, d2, d3, d4 })
    }

    pub fn uniform(d: f64) -> Result<Self> {
        Self::new(d, d, d, d)
    }

    /// Checks that L3 = [t^{d2-1}, 1 - t^{d3-1}] is non-empty at height t.
    pub fn check_at(&self, t: f64) -> Result<()> {
        if t.powf(self.d2 - 1.0) >= 1.0 - t.powf(self.d3 - 1.0) {
            return Err(Error::invalid(format!(
                "window d2={}, d3={} is degenerate at t={t}",
                self.d2, self.d3
            )));
        }
        if 1.0 / t >= t.powf(self.d2 - 1.0) {
            return Err(Error::invalid(format!("t={t} too small for the window")));
        }
        Ok(())
    }

    /// Boundaries of L1..L4: [-t^{d1-1}, 1/t, t^{d2-1}, 1-t^{d3-1}, 1+t^{d4-1}].
    pub fn boundaries(&self, t: f64) -> [f64; 5] {
        [
            -t.powf(self.d1 - 1.0),
            1.0 / t,
            t.powf(self.d2 - 1.0),
            1.0 - t.powf(self.d3 - 1.0),
            1.0 + t.powf(self.d4 - 1.0),
        ]
    }

    /// e^{-pi t^{min(d1, d4)}}, the size of the neglected tails.
    pub fn tail_bound(&self, t: f64) -> f64 {
        (-PI * t.powf(self.d1.min(self.d4))).exp()
    }
}

/// ln K(sigma, t, tau), choosing the gamma combination by the size of t(1 - tau).
pub fn ln_kernel(p: StripPoint, tau: f64) -> Result<Complex64> {
    let u = p.t() * (1.0 - tau);
    if u.abs() < 10.0 || u.abs() <= 0.5 * p.t() {
        return ln_kernel_offset(p, u);
    }
    if u == 0.0 {
        return Err(Error::PoleOfGamma(Complex64::new(0.0, 0.0)));
    }
    let iu = Complex64::new(0.0, u);
    Ok(log_gamma(iu)? + log_gamma(Complex64::new(p.sigma(), tau * p.t()))? - log_gamma(p.s())?)
}

/// ln[Gamma(iu) Gamma(s - iu) / Gamma(s)], the kernel written in the offset
/// u = t(1 - tau) so that small offsets keep full relative precision.
pub fn ln_kernel_offset(p: StripPoint, u: f64) -> Result<Complex64> {
    if u == 0.0 {
        return Err(Error::PoleOfGamma(Complex64::new(0.0, 0.0)));
    }
    let s = p.s();
    let iu = Complex64::new(0.0, u);
    if u.abs() < 10.0 {
        // Gamma(iu) = Gamma(1+iu)/(iu); the ratio Gamma(s-iu)/Gamma(s) is
        // formed without subtracting two large logarithms.
        let lg1 = log_gamma(Complex64::new(1.0, u))?;
        return Ok(lg1 - iu.ln() + ln_gamma_diff(s, -iu)?);
    }
    Ok(log_gamma(iu)? + ln_gamma_diff(s, -iu)?)
}

/// K(sigma, t, tau) = Gamma(it - i tau t) Gamma(sigma + i tau t) / Gamma(sigma + it).
pub fn kernel_k(p: StripPoint, tau: f64) -> Result<Complex64> {
    if tau == 1.0 {
        return Err(Error::PoleOfGamma(Complex64::new(0.0, 0.0)));
    }
    Ok(ln_kernel(p, tau)?.exp())
}

/// The two terms of the symmetrized integrand before the reflection
/// tau -> -tau, each formed from its own gamma factors:
/// Gamma(it + i tau t) Gamma(sigma - i tau t) / Gamma(sigma + it) and
/// Gamma(-it + i tau t) Gamma(sigma - i tau t) / Gamma(sigma - it).
pub fn kernel_parts(p: StripPoint, tau: f64) -> Result<(Complex64, Complex64)> {
    let (sigma, t) = (p.sigma(), p.t());
    let g_mid = log_gamma(Complex64::new(sigma, -tau * t))?;
    let first =
        log_gamma(Complex64::new(0.0, t + tau * t))? + g_mid - log_gamma(Complex64::new(sigma, t))?;
    let second = log_gamma(Complex64::new(0.0, -t + tau * t))? + g_mid
        - log_gamma(Complex64::new(sigma, -t))?;
    Ok((first.exp(), second.exp()))
}

/// Forcing term G(sigma, t).
pub fn g_exact(p: StripPoint) -> Result<f64> {
    let (sigma, t) = (p.sigma(), p.t());
    if p.on_critical_line() {
        let psi = digamma(Complex64::new(0.5, t))?;
        return Ok(psi.re + 2.0 * EULER_GAMMA - (2.0 * PI).ln() + 2.0 / (1.0 + 4.0 * t * t));
    }
    let ratio =
        (log_gamma(Complex64::new(1.0 - sigma, t))? - log_gamma(Complex64::new(sigma, t))?).exp();
    let z1 = zeta(Complex64::new(2.0 * sigma - 1.0, 0.0))?.re;
    let z2 = zeta(Complex64::new(2.0 * sigma, 0.0))?.re;
    let g = gamma_real(2.0 * sigma - 1.0)?;
    let sm1 = sigma - 1.0;
    Ok(z2 + 2.0 * ratio.re * g * z1 + 2.0 * sm1 * z1 / (sm1 * sm1 + t * t))
}

/// Leading large-t form of G(sigma, t) without error terms.
pub fn g_asym(p: StripPoint) -> Result<f64> {
    let (sigma, t) = (p.sigma(), p.t());
    if t < 10.0 {
        return Err(Error::invalid(format!(
            "asymptotic forcing term needs t >= 10, got {t}"
        )));
    }
    if p.on_critical_line() {
        return Ok(t.ln() + 2.0 * EULER_GAMMA - (2.0 * PI).ln());
    }
    let z1 = zeta(Complex64::new(2.0 * sigma - 1.0, 0.0))?.re;
    let z2 = zeta(Complex64::new(2.0 * sigma, 0.0))?.re;
    let g = gamma_real(2.0 * sigma - 1.0)?;
    Ok(z2 + 2.0 * g * z1 * (PI * sigma).sin() * t.powf(1.0 - 2.0 * sigma))
}

/// |zeta(sigma + i y)|^2 memoized on (sigma, y rounded to 1e-12).
pub struct ZetaCache {
    evaluator: Arc<dyn ZetaEvaluator>,
    map: DashMap<(u64, i128), f64>,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl Default for ZetaCache {
    fn default() -> Self {
        Self::new(Arc::new(EulerMaclaurin::default()))
    }
}

impl ZetaCache {
    pub fn new(evaluator: Arc<dyn ZetaEvaluator>) -> Self {
        Self {
            evaluator,
            map: DashMap::new(),
            hits: AtomicUsize::new(0),
            misses: AtomicUsize::new(0),
        }
    }

    pub fn abs_sq(&self, sigma: f64, y: f64) -> Result<f64> {
        let key = (sigma.to_bits(), (y * 1e12).round() as i128);
        if let Some(v) = self.map.get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(*v);
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let v = self.evaluator.eval(Complex64::new(sigma, y))?.norm_sqr();
        self.map.insert(key, v);
        Ok(v)
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }
}

/// Local phase rate of Re{K} |zeta|^2 in tau, used to pre-split panels.
fn ie_phase_rate(t: f64, tau: f64) -> f64 {
    let a = tau.abs().max(1.0 / t);
    let b = (1.0 - tau).abs().max(1.0 / t);
    let zeta_rate = 2.0 * ((tau.abs() * t).max(2.0 * PI) / (2.0 * PI)).ln();
    t * ((a / b).ln().abs() + zeta_rate) + 1.0
}

fn ie_breakpoints(p: StripPoint, w: &DeltaWindow, lo: f64, hi: f64) -> Vec<f64> {
    let t = p.t();
    let mut pts: Vec<f64> = w.boundaries(t).to_vec();
    pts.extend([0.0, 1.0]);
    pts.retain(|&x| x > lo && x < hi);
    pts.push(lo);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let mut out = Vec::new();
    for seg in pts.windows(2) {
        out.extend(phase_breakpoints(
            seg[0],
            seg[1],
            |x| ie_phase_rate(t, x),
            std::f64::consts::FRAC_PI_4,
        ));
    }
    out
}

/// (t/pi) int_lo^hi Re{K} |zeta(sigma + i tau t)|^2 d tau.
pub fn ie_integral(
    p: StripPoint,
    w: &DeltaWindow,
    lo: f64,
    hi: f64,
    tol: f64,
    cache: &ZetaCache,
) -> Result<QuadResult> {
    let (sigma, t) = (p.sigma(), p.t());
    let f = |tau: f64| -> Result<Complex64> {
        let k = kernel_k(p, tau)?;
        let z = cache.abs_sq(sigma, tau * t)?;
        Ok(Complex64::new(t / PI * k.re * z, 0.0))
    };
    let integ = Integrator::new(tol)
        .rel_tol(tol)
        .breakpoints(ie_breakpoints(p, w, lo, hi))
        .max_subdivisions(20_000);
    integ.try_integrate(f, lo, hi)
}

fn ie_tol(p: StripPoint, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    Ok(tol * g_exact(p)?.abs().max(1.0))
}

/// Residual of the windowed integral equation: lhs is the windowed integral,
/// rhs is -G(sigma, t).
pub fn ie_residual(p: StripPoint, w: DeltaWindow, tol: f64) -> Result<ResidualReport> {
    ie_residual_with(p, w, tol, &ZetaCache::default())
}

pub fn ie_residual_with(
    p: StripPoint,
    w: DeltaWindow,
    tol: f64,
    cache: &ZetaCache,
) -> Result<ResidualReport> {
    let b = w.boundaries(p.t());
    let lhs = ie_integral(p, &w, b[0], b[4], ie_tol(p, tol)?, cache)?;
    Ok(ResidualReport::new(
        lhs.value,
        Complex64::new(-g_exact(p)?, 0.0),
    ))
}

/// I1..I4 over the sub-intervals L1..L4.
pub fn i_split(p: StripPoint, w: DeltaWindow, tol: f64) -> Result<[QuadResult; 4]> {
    i_split_with(p, w, tol, &ZetaCache::default())
}

pub fn i_split_with(
    p: StripPoint,
    w: DeltaWindow,
    tol: f64,
    cache: &ZetaCache,
) -> Result<[QuadResult; 4]> {
    w.check_at(p.t())?;
    let b = w.boundaries(p.t());
    let abs = ie_tol(p, tol)? / 4.0;
    let mut out = [QuadResult::zero(); 4];
    for j in 0..4 {
        out[j] = ie_integral(p, &w, b[j], b[j + 1], abs, cache)?;
    }
    Ok(out)
}

/// I1 alone (needs only d1).
pub fn i1(p: StripPoint, d1: f64, tol: f64) -> Result<QuadResult> {
    let w = DeltaWindow::new(d1, 0.5, 0.5, 0.5)?;
    let b = w.boundaries(p.t());
    ie_integral(p, &w, b[0], b[1], tol, &ZetaCache::default())
}

/// I2 alone (needs only d2).
pub fn i2(p: StripPoint, d2: f64, tol: f64) -> Result<QuadResult> {
    let w = DeltaWindow::new(0.5, d2, 0.5, 0.5)?;
    let b = w.boundaries(p.t());
    ie_integral(p, &w, b[1], b[2], tol, &ZetaCache::default())
}

/// The growth shape of the bound on I1, without its constant.
pub fn i1_bound(sigma: f64, t: f64, d1: f64) -> f64 {
    if sigma <= 0.5 {
        t.powf(-sigma + (2.0 - 4.0 * sigma / 3.0) * d1)
    } else {
        t.powf(-sigma + (5.0 / 3.0 - 2.0 * sigma / 3.0) * d1)
    }
}

/// The growth shape of the bound on I2, without its constant.
pub fn i2_bound(sigma: f64, t: f64, d2: f64) -> Result<f64> {
    if sigma == 0.5 {
        return Ok(t.powf(-0.5 + d2) * t.ln());
    }
    if sigma < 0.5 {
        let z = zeta(Complex64::new(2.0 - 2.0 * sigma, 0.0))?.re;
        Ok(t.powf(-sigma + 2.0 * (1.0 - sigma) * d2) * z)
    } else {
        let z = zeta(Complex64::new(2.0 * sigma, 0.0))?.re;
        Ok(t.powf(-sigma + (sigma + 0.5) * d2) * z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRatio {
    pub t: f64,
    pub value: f64,
    pub bound: f64,
    pub ratio: f64,
}

impl BoundRatio {
    pub fn new(t: f64, value: f64, bound: f64) -> Self {
        Self {
            t,
            value,
            bound,
            ratio: value.abs() / bound,
        }
    }
}

/// max/min of the ratios; the band width of a bound-shape check.
pub fn band_width(ratios: &[BoundRatio]) -> f64 {
    let max = ratios.iter().map(|r| r.ratio).fold(f64::MIN, f64::max);
    let min = ratios.iter().map(|r| r.ratio).fold(f64::MAX, f64::min);
    max / min
}

/// int_1^T |zeta(sigma + i rho)|^2 d rho.
pub fn second_moment(sigma: f64, big_t: f64, tol: f64) -> Result<QuadResult> {
    if big_t < 10.0 {
        return Err(Error::invalid(format!("T = {big_t} must be at least 10")));
    }
    let cache = ZetaCache::default();
    let f = |rho: f64| cache.abs_sq(sigma, rho).map(|v| Complex64::new(v, 0.0));
    let breaks: Vec<f64> = (2..big_t.ceil() as usize).map(|k| k as f64).collect();
    Integrator::new(tol)
        .rel_tol(1e-12)
        .breakpoints(breaks)
        .try_integrate(f, 1.0, big_t)
}

/// int_1^T |zeta(1/2 + i rho)|^2 d rho.
pub fn atkinson_moment(big_t: f64, tol: f64) -> Result<QuadResult> {
    second_moment(0.5, big_t, tol)
}

/// T ln T + (2 gamma - 1 - ln 2 pi) T.
pub fn atkinson_main_term(big_t: f64) -> f64 {
    big_t * big_t.ln() + (2.0 * EULER_GAMMA - 1.0 - (2.0 * PI).ln()) * big_t
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn sp(sigma: f64, t: f64) -> StripPoint {
        StripPoint::new(sigma, t).unwrap()
    }

    #[test]
    fn kernel_pole_and_leading_singularity() {
        let p = sp(0.5, 100.0);
        assert!(kernel_k(p, 1.0).is_err());
        for eps in [1e-6, -1e-6] {
            let tau = 1.0 + eps;
            let k = kernel_k(p, tau).unwrap();
            let lead = -1.0 / Complex64::new(0.0, 100.0 * (tau - 1.0));
            assert!((k - lead).norm() / lead.norm() < 1e-3);
        }
    }

    #[test]
    fn real_part_is_continuous_through_one() {
        let p = sp(0.5, 100.0);
        // one-sided limits by linear extrapolation in the offset
        let side = |e: f64| {
            2.0 * kernel_k(p, 1.0 + e).unwrap().re - kernel_k(p, 1.0 + 2.0 * e).unwrap().re
        };
        let (a, b) = (side(1e-7), side(-1e-7));
        assert!((a - b).abs() < 1e-6, "{a} vs {b}");
        // the limit is -Re Psi(sigma + it) - gamma
        let lim = -digamma(p.s()).unwrap().re - EULER_GAMMA;
        assert!((a - lim).abs() < 1e-5);
    }

    #[test]
    fn near_band_matches_direct_formula() {
        let p = sp(0.3, 80.0);
        for tau in [1.0 - 0.1, 1.0 - 0.12, 1.0 + 0.11] {
            let direct = (log_gamma(Complex64::new(0.0, 80.0 * (1.0 - tau))).unwrap()
                + log_gamma(Complex64::new(0.3, 80.0 * tau)).unwrap()
                - log_gamma(p.s()).unwrap())
            .exp();
            let k = kernel_k(p, tau).unwrap();
            assert!((k - direct).norm() <= 1e-10 * direct.norm());
        }
    }

    #[test]
    fn kernel_is_exponentially_small_for_negative_tau() {
        let p = sp(0.5, 30.0);
        let k = kernel_k(p, -0.5).unwrap();
        assert!(k.norm() <= (-PI * 0.5 * 30.0 * 0.9).exp() * 10.0);
    }

    #[test]
    fn kernel_survives_large_t() {
        let k = kernel_k(sp(0.5, 1e7), 0.5).unwrap();
        assert!(k.re.is_finite() && k.im.is_finite() && k.norm() > 0.0);
    }

    #[test]
    fn forcing_term_values() {
        let g = g_exact(sp(0.5, 100.0)).unwrap();
        assert!((g - 3.921724).abs() < 1e-4);
        let asym = g_asym(sp(0.5, std::f64::consts::E.max(10.0))).unwrap();
        assert!(asym.is_finite());
        let e = std::f64::consts::E;
        let one = 1.0 + 2.0 * EULER_GAMMA - (2.0 * PI).ln();
        assert_relative_eq!(e.ln() + 2.0 * EULER_GAMMA - (2.0 * PI).ln(), one);
        assert!(g_asym(sp(0.5, 5.0)).is_err());
    }

    #[test]
    fn forcing_branches_agree_near_half() {
        let g0 = g_exact(sp(0.5, 10.0)).unwrap();
        for s in [0.5 + 1e-4, 0.5 - 1e-4] {
            assert!((g_exact(sp(s, 10.0)).unwrap() - g0).abs() <= 1e-2);
        }
        let g5 = g_exact(sp(0.5, 5.0)).unwrap();
        for s in [0.5 + 1e-5, 0.5 - 1e-5] {
            assert!((g_exact(sp(s, 5.0)).unwrap() - g5).abs() <= 1e-3);
        }
    }

    #[test]
    fn forcing_large_t_off_line() {
        let p = sp(0.75, 1e4);
        let exact = g_exact(p).unwrap();
        let asym = g_asym(p).unwrap();
        assert!((exact - asym).abs() / exact.abs() < 1e-3);
        let p6 = sp(0.6, 1e6);
        let want = zeta(Complex64::new(1.2, 0.0)).unwrap().re
            + 2.0
                * gamma_real(0.2).unwrap()
                * zeta(Complex64::new(0.2, 0.0)).unwrap().re
                * (0.6 * PI).sin()
                * 1e6f64.powf(-0.2);
        assert_relative_eq!(g_asym(p6).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn critical_line_deviation_decays_like_inverse_square() {
        let d = |t: f64| (g_exact(sp(0.5, t)).unwrap() - g_asym(sp(0.5, t)).unwrap()).abs();
        let r = d(100.0) / d(200.0);
        assert!((r - 4.0).abs() < 0.8, "ratio {r}");
    }

    #[test]
    fn window_validation() {
        assert!(DeltaWindow::new(0.0, 0.5, 0.5, 0.5).is_err());
        let w = DeltaWindow::uniform(0.9).unwrap();
        assert!(w.check_at(20.0).is_err());
        assert!(DeltaWindow::uniform(0.4).unwrap().check_at(100.0).is_ok());
        let b = DeltaWindow::uniform(0.5).unwrap().boundaries(100.0);
        assert_eq!(b, [-0.1, 0.01, 0.1, 0.9, 1.1]);
    }

    #[test]
    fn split_is_additive() {
        let p = sp(0.5, 100.0);
        let w = DeltaWindow::new(0.2, 0.5, 0.2, 0.2).unwrap();
        let cache = ZetaCache::default();
        let parts = i_split_with(p, w, 1e-10, &cache).unwrap();
        let sum: Complex64 = parts.iter().map(|q| q.value).sum();
        let b = w.boundaries(100.0);
        let full = ie_integral(p, &w, b[0], b[4], ie_tol(p, 1e-10).unwrap(), &cache).unwrap();
        assert!((sum - full.value).norm() <= 1e-8 * full.value.norm());
        assert!(cache.hits() > 0);
    }

    #[test]
    fn residual_small_at_moderate_height() {
        let w = DeltaWindow::uniform(0.3).unwrap();
        for sigma in [0.5, 0.75] {
            let r = ie_residual(sp(sigma, 100.0), w, 1e-8).unwrap();
            assert!(r.rel_err <= 5e-2, "sigma={sigma}: {r:?}");
        }
    }

    #[test]
    fn window_tail_is_tiny() {
        let p = sp(0.5, 100.0);
        let w = DeltaWindow::uniform(0.3).unwrap();
        let cache = ZetaCache::default();
        let tail = ie_integral(p, &w, -0.5, w.boundaries(100.0)[0], 1e-14, &cache).unwrap();
        assert!(tail.value.norm() <= 10.0 * (-PI * 100f64.powf(0.3)).exp());
    }

    #[test]
    fn moment_increases() {
        let a = atkinson_moment(100.0, 1e-8).unwrap().value.re;
        let b = atkinson_moment(200.0, 1e-8).unwrap().value.re;
        assert!(b > a && a > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn real_part_matches_symmetrized_parts(sigma in 0.05f64..0.95, t in 5.0f64..300.0, tau in -0.5f64..1.6) {
            prop_assume!((tau - 1.0).abs() > 1e-3 && (tau + 1.0).abs() > 1e-3 && tau.abs() > 1e-6);
            let p = sp(sigma, t);
            let k = kernel_k(p, tau).unwrap();
            let (first_reflected, _) = kernel_parts(p, -tau).unwrap();
            let (_, second) = kernel_parts(p, tau).unwrap();
            let sym = (first_reflected + second) * 0.5;
            prop_assert!((sym.re - k.re).abs() <= 1e-10 * k.norm().max(1e-300));
            prop_assert!(sym.im.abs() <= 1e-10 * k.norm().max(1e-300));
        }
    }
}
