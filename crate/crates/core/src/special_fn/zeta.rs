use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use super::gamma::log_gamma;
use super::phase::{cis_product, pow_neg};
use crate::error::{Error, Result};
use crate::summation::NeumaierComplex;
use crate::types::StripPoint;

/// B_{2k} / (2k)!, k = 1..15.
const BERNOULLI_OVER_FACTORIAL: [f64; 15] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_889e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_468e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_23e-18,
    -1.395_446_468_581_252e-19,
    3.534_707_039_629_467e-21,
    -8.953_517_427_037_546e-23,
    2.267_952_452_337_683e-24,
];

pub trait ZetaEvaluator: Send + Sync {
    fn name(&self) -> &'static str;
    fn eval(&self, s: Complex64) -> Result<Complex64>;
}

#[derive(Debug, Clone, Copy)]
pub struct EulerMaclaurin {
    pub min_terms: usize,
    pub max_terms: usize,
    pub corrections: usize,
}

impl Default for EulerMaclaurin {
    fn default() -> Self {
        Self {
            min_terms: 50,
            max_terms: 20_000_000,
            corrections: 15,
        }
    }
}

impl EulerMaclaurin {
    fn terms(&self, s: Complex64) -> usize {
        let n = (2.0 * s.im.abs()).ceil() as usize;
        n.max(self.min_terms).min(self.max_terms)
    }

    /// sum_{n >= 0} (n + offset)^{-s}, with `offset >= 1`.
    fn shifted_sum(&self, s: Complex64, offset: f64) -> Result<Complex64> {
        if (s - 1.0).norm() < 1e-12 {
            return Err(Error::ZetaPole);
        }
        let n = self.terms(s);
        let mut acc = NeumaierComplex::default();
        for k in 0..n {
            acc.add(pow_neg(s, (k as f64 + offset).ln()));
        }
        let a = n as f64 + offset;
        let ln_a = a.ln();
        let a_neg_s = pow_neg(s, ln_a);
        let mut tail = a_neg_s * a / (s - 1.0) + a_neg_s * 0.5;
        // B_{2k}/(2k)! * s (s+1) ... (s+2k-2) * a^{-s-2k+1}
        let mut rising = s;
        let mut power = a_neg_s / a;
        let inv_a2 = 1.0 / (a * a);
        for (k, b) in BERNOULLI_OVER_FACTORIAL
            .iter()
            .take(self.corrections)
            .enumerate()
        {
            tail += rising * power * *b;
            let m = 2.0 * k as f64;
            rising *= (s + m + 1.0) * (s + m + 2.0);
            power *= inv_a2;
        }
        acc.add(tail);
        Ok(acc.value())
    }
}

impl ZetaEvaluator for EulerMaclaurin {
    fn name(&self) -> &'static str {
        "euler-maclaurin"
    }

    fn eval(&self, s: Complex64) -> Result<Complex64> {
        self.shifted_sum(s, 1.0)
    }
}

/// Riemann-Siegel formula on the critical line with the first two
/// correction terms. Only defined for `Re s = 1/2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RiemannSiegel;

/// theta(t) = arg Gamma(1/4 + it/2) - (t/2) ln pi.
pub fn riemann_siegel_theta(t: f64) -> Result<f64> {
    Ok(log_gamma(Complex64::new(0.25, 0.5 * t))?.im - 0.5 * t * PI.ln())
}

fn rs_psi(z: Complex64) -> Complex64 {
    let num = (2.0 * PI * (z * z - z - 1.0 / 16.0)).cos();
    num / (2.0 * PI * z).cos()
}

/// C0(p) and C1(p) = -Psi'''(p) / (96 pi^2) from a Cauchy integral of Psi.
fn rs_corrections(p: f64) -> (f64, f64) {
    let mut r = 0.2;
    let near_root = |x: f64| ((x - 0.25) * 2.0 - ((x - 0.25) * 2.0).round()).abs() < 2e-3;
    if near_root(p + r) || near_root(p - r) {
        r = 0.23;
    }
    let m = 48;
    let (mut c0, mut d3) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for k in 0..m {
        let th = 2.0 * PI * (k as f64 + 0.5) / m as f64;
        let e = Complex64::from_polar(1.0, th);
        let f = rs_psi(Complex64::new(p, 0.0) + r * e);
        c0 += f;
        d3 += f * Complex64::from_polar(1.0, -3.0 * th);
    }
    let c0 = c0.re / m as f64;
    let d3 = 6.0 * d3.re / (m as f64 * r.powi(3));
    (c0, -d3 / (96.0 * PI * PI))
}

impl RiemannSiegel {
    pub fn z_function(&self, t: f64) -> Result<f64> {
        if t < 10.0 {
            return Err(Error::invalid(format!(
                "Riemann-Siegel needs t >= 10, got {t}"
            )));
        }
        let theta = riemann_siegel_theta(t)?;
        let a = (t / (2.0 * PI)).sqrt();
        let n = a.floor() as usize;
        let p = a - n as f64;
        let mut acc = 0.0;
        let mut comp = 0.0;
        for k in 1..=n {
            let lk = (k as f64).ln();
            let ph = cis_product(t, lk).conj() * Complex64::from_polar(1.0, theta);
            let term = 2.0 * ph.re / (k as f64).sqrt();
            let y = term - comp;
            let sum = acc + y;
            comp = (sum - acc) - y;
            acc = sum;
        }
        let (c0, c1) = rs_corrections(p);
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        let rem = sign * a.powf(-0.5) * (c0 + c1 / a);
        Ok(acc + rem)
    }
}

impl ZetaEvaluator for RiemannSiegel {
    fn name(&self) -> &'static str {
        "riemann-siegel"
    }

    fn eval(&self, s: Complex64) -> Result<Complex64> {
        if s.re != 0.5 {
            return Err(Error::invalid(
                "Riemann-Siegel evaluator requires Re s = 1/2",
            ));
        }
        if s.im < 0.0 {
            return self.eval(s.conj()).map(|v| v.conj());
        }
        let z = self.z_function(s.im)?;
        let theta = riemann_siegel_theta(s.im)?;
        Ok(Complex64::from_polar(z, -theta))
    }
}

type Registry = Vec<Arc<dyn ZetaEvaluator>>;

fn registry() -> &'static Registry {
    static REG: OnceLock<Registry> = OnceLock::new();
    REG.get_or_init(|| vec![Arc::new(EulerMaclaurin::default()), Arc::new(RiemannSiegel)])
}

pub fn zeta_evaluator_names() -> Vec<&'static str> {
    registry().iter().map(|e| e.name()).collect()
}

pub fn zeta_evaluator(name: &str) -> Result<Arc<dyn ZetaEvaluator>> {
    registry()
        .iter()
        .find(|e| e.name() == name)
        .cloned()
        .ok_or_else(|| {
            Error::invalid(format!(
                "unknown zeta evaluator '{name}' (known: {})",
                zeta_evaluator_names().join(", ")
            ))
        })
}

pub fn zeta(s: Complex64) -> Result<Complex64> {
    EulerMaclaurin::default().eval(s)
}

pub fn zeta_abs_sq(p: StripPoint) -> Result<f64> {
    Ok(zeta(p.s())?.norm_sqr())
}

/// sum_{n >= 1} (n + alpha)^{-s}, continued analytically in s.
pub fn hurwitz_zeta1(s: Complex64, alpha: f64) -> Result<Complex64> {
    if !(alpha >= 0.0) {
        return Err(Error::invalid(format!(
            "alpha = {alpha} must be non-negative"
        )));
    }
    EulerMaclaurin::default().shifted_sum(s, 1.0 + alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        let z2 = zeta(c(2.0, 0.0)).unwrap();
        assert_relative_eq!(z2.re, PI * PI / 6.0, epsilon = 1e-14);
        assert!(z2.im.abs() < 1e-16);
        assert_relative_eq!(
            zeta(c(0.5, 0.0)).unwrap().re,
            -1.4603545088095868,
            epsilon = 1e-13
        );
        assert_relative_eq!(
            zeta(c(-0.5, 0.0)).unwrap().re,
            -0.20788622497735457,
            epsilon = 1e-13
        );
    }

    #[test]
    fn mpmath_reference_values() {
        let cases = [
            (c(0.5, 100.0), c(2.6926198856813241, -0.020386029602598162)),
            (c(0.3, 1000.0), c(-0.92072449430422778, 2.2115481522301019)),
            (
                c(0.75, 12345.6),
                c(0.79509010305701252, 0.40599676021305111),
            ),
        ];
        for (s, want) in cases {
            let got = zeta(s).unwrap();
            assert!(
                (got - want).norm() <= 1e-11 * want.norm(),
                "{s}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn first_zero() {
        // sign-change bisection on the real function Z(t) = e^{i theta} zeta(1/2+it)
        let z_em = |t: f64| {
            let th = riemann_siegel_theta(t).unwrap();
            (zeta(c(0.5, t)).unwrap() * Complex64::from_polar(1.0, th)).re
        };
        let bisect = |f: &dyn Fn(f64) -> f64| {
            let (mut lo, mut hi) = (14.0, 14.3);
            let flo = f(lo);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if f(mid).signum() == flo.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        let root = bisect(&z_em);
        assert!((root - 14.134725142).abs() < 1e-8);
        let rs_root = bisect(&|t| RiemannSiegel.z_function(t).unwrap());
        assert!((rs_root - root).abs() < 5e-3);
        assert!(zeta(c(0.5, 14.134725142)).unwrap().norm() <= 1e-6);
        assert!(zeta_abs_sq(StripPoint::new(0.5, 14.134725142).unwrap()).unwrap() <= 1e-12);
    }

    #[test]
    fn reality_and_product_form() {
        let a = zeta(c(0.5, -3.0)).unwrap();
        let b = zeta(c(0.5, 3.0)).unwrap();
        assert!((a - b.conj()).norm() < 1e-15);
        let p = StripPoint::new(0.5, 100.0).unwrap();
        let prod = zeta(p.s()).unwrap() * zeta(p.s().conj()).unwrap();
        assert_relative_eq!(zeta_abs_sq(p).unwrap(), prod.re, max_relative = 1e-9);
        let near = zeta_abs_sq(StripPoint::new(0.9, 1e-7).unwrap()).unwrap();
        assert_relative_eq!(
            near,
            zeta(c(0.9, 0.0)).unwrap().norm_sqr(),
            max_relative = 1e-6
        );
    }

    #[test]
    fn behaviour_near_one_and_zero() {
        assert!(matches!(zeta(c(1.0, 0.0)), Err(Error::ZetaPole)));
        for eps in [1e-3, 1e-5] {
            let v = zeta(c(1.0 + eps, 0.0)).unwrap().re * eps;
            assert!((v - 1.0).abs() < 2.0 * eps);
        }
        let eps = 1e-4;
        let v = zeta(c(eps, 0.0)).unwrap().re;
        assert!((v + 0.5 * (1.0 + eps * (2.0 * PI).ln())).abs() < 1e-6);
    }

    #[test]
    fn hurwitz_values() {
        let h0 = hurwitz_zeta1(c(2.0, 0.0), 0.0).unwrap();
        assert_relative_eq!(h0.re, PI * PI / 6.0, epsilon = 1e-14);
        let h1 = hurwitz_zeta1(c(2.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(h1.re, PI * PI / 6.0 - 1.0, epsilon = 1e-14);
        // direct summation of 5000 terms plus Euler-Maclaurin tail integral
        let mut direct = 0.0;
        for n in 1..=5000 {
            direct += (n as f64 + 0.5).powi(-3);
        }
        let a = 5000.5f64;
        direct += 1.0 / (2.0 * (a + 0.5) * (a + 0.5));
        let h = hurwitz_zeta1(c(3.0, 0.0), 0.5).unwrap();
        assert!((h.re - direct).abs() < 1e-9);
        assert!(hurwitz_zeta1(c(2.0, 0.0), -1.0).is_err());
    }

    #[test]
    fn hurwitz_at_zero_offset_is_zeta() {
        for s in [c(0.5, 10.0), c(0.7, 300.0), c(1.5, -40.0), c(0.2, 0.0)] {
            let z = zeta(s).unwrap();
            let h = hurwitz_zeta1(s, 0.0).unwrap();
            assert!((z - h).norm() <= 1e-12 * z.norm());
        }
    }

    #[test]
    fn riemann_siegel_agrees_with_euler_maclaurin() {
        let rs = zeta_evaluator("riemann-siegel").unwrap();
        let em = zeta_evaluator("euler-maclaurin").unwrap();
        for t in [5000.0, 20000.5, 100000.25] {
            let s = c(0.5, t);
            let a = rs.eval(s).unwrap();
            let b = em.eval(s).unwrap();
            assert!((a - b).norm() < 1e-5, "t={t}: {a} vs {b}");
        }
        assert!(rs.eval(c(0.6, 100.0)).is_err());
        assert!(zeta_evaluator("nope").is_err());
    }
}
