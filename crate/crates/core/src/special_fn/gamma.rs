use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;
const SHIFT_RADIUS: f64 = 10.0;

/// B_{2k} / (2k (2k-1)), k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// B_{2k} / (2k), k = 1..10.
const DIGAMMA_ASY: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
    43867.0 / 14364.0,
    -174611.0 / 6600.0,
];

fn check_pole(z: Complex64) -> Result<()> {
    if z.re <= 0.5 && z.im.abs() < 1e-12 && (z.re - z.re.round()).abs() < 1e-12 {
        return Err(Error::PoleOfGamma(z));
    }
    Ok(())
}

fn stirling_series(z: Complex64) -> Complex64 {
    let w = z.inv();
    let w2 = w * w;
    let mut acc = Complex64::new(0.0, 0.0);
    for c in STIRLING.iter().rev() {
        acc = acc * w2 + c;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + acc * w
}

fn shift_count(z: Complex64) -> usize {
    if z.norm() >= SHIFT_RADIUS {
        return 0;
    }
    let need = (SHIFT_RADIUS * SHIFT_RADIUS - z.im * z.im).max(0.0).sqrt() - z.re;
    need.ceil().max(0.0) as usize
}

/// Branch of ln sin(pi z) analytic in the upper half plane, real on (0, 1).
fn ln_sin_pi_upper(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let w = (2.0 * PI * i * z).exp();
    let l1p = ln_1p(-w);
    -i * PI * z + l1p + Complex64::new(-LN_2, PI / 2.0)
}

pub(crate) fn ln_1p(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        // w - w^2/2 + w^3/3 - w^4/4
        let w2 = w * w;
        w - w2 * 0.5 + w2 * w / 3.0 - w2 * w2 * 0.25
    } else {
        (Complex64::new(1.0, 0.0) + w).ln()
    }
}

fn log_gamma_right(z: Complex64) -> Complex64 {
    let n = shift_count(z);
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..n {
        correction += (z + k as f64).ln();
    }
    stirling_series(z + n as f64) - correction
}

/// Principal branch of ln Gamma(z).
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.im < 0.0 {
        return log_gamma(z.conj()).map(|v| v.conj());
    }
    if z.re < 0.0 {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        return Ok(LN_PI - log_gamma_right(one_minus) - ln_sin_pi_upper(z));
    }
    Ok(log_gamma_right(z))
}

/// ln Gamma(w + h) - ln Gamma(w) without cancellation when |h| is small
/// compared with |w|. Both arguments must have non-negative real part.
pub fn ln_gamma_diff(w: Complex64, h: Complex64) -> Result<Complex64> {
    let z = w + h;
    check_pole(w)?;
    check_pole(z)?;
    if w.re < 0.0 || z.re < 0.0 {
        return Ok(log_gamma(z)? - log_gamma(w)?);
    }
    let n = shift_count(w).max(shift_count(z));
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += ln_1p(h / (w + k as f64));
    }
    let ws = w + n as f64;
    let zs = z + n as f64;
    let l = ln_1p(h / ws);
    // (z-1/2) ln z - z - [(w-1/2) ln w - w] = (w-1/2) l + h ln z - h
    let mut diff = (ws - 0.5) * l + h * zs.ln() - h;
    let (iw, iz) = (ws.inv(), zs.inv());
    let (iw2, iz2) = (iw * iw, iz * iz);
    let (mut pw, mut pz) = (iw, iz);
    for c in STIRLING.iter() {
        diff += (pz - pw) * c;
        pw *= iw2;
        pz *= iz2;
    }
    Ok(diff - acc)
}

/// Gamma(x) for real x off the poles.
pub fn gamma_real(x: f64) -> Result<f64> {
    Ok(log_gamma(Complex64::new(x, 0.0))?.exp().re)
}

fn cot_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    if z.im >= 0.0 {
        let w = (2.0 * PI * i * z).exp();
        i * (w + one) / (w - one)
    } else {
        let v = (-2.0 * PI * i * z).exp();
        i * (one + v) / (one - v)
    }
}

/// Digamma function Psi(z) = Gamma'(z)/Gamma(z).
pub fn digamma(z: Complex64) -> Result<Complex64> {
    check_pole(z)?;
    if z.re < 0.0 {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        return Ok(digamma(one_minus)? - PI * cot_pi(z));
    }
    let n = shift_count(z);
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..n {
        acc += (z + k as f64).inv();
    }
    let zs = z + n as f64;
    let w = zs.inv();
    let w2 = w * w;
    let mut series = Complex64::new(0.0, 0.0);
    for c in DIGAMMA_ASY.iter().rev() {
        series = series * w2 + c;
    }
    Ok(zs.ln() - 0.5 * w - series * w2 - acc)
}

/// Leading Stirling form of Gamma(sigma + i xi) (or of its conjugate),
/// without an error term.
pub fn stirling_gamma(sigma: f64, xi: f64, conjugate: bool) -> Result<Complex64> {
    if !(xi > 0.0) {
        return Err(Error::invalid(format!("xi = {xi} must be positive")));
    }
    let sgn = if conjugate { -1.0 } else { 1.0 };
    let lnxi = xi.ln();
    let re = LN_SQRT_2PI + (sigma - 0.5) * lnxi - PI * xi / 2.0;
    let im = sgn * (-PI / 4.0 - xi + xi * lnxi + PI * sigma / 2.0);
    Ok(Complex64::new(re, im).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(half.re, 0.5723649429247001, epsilon = 1e-14);
        assert_relative_eq!(
            log_gamma(c(10.0, 0.0)).unwrap().re,
            362880f64.ln(),
            epsilon = 1e-13
        );
    }

    #[test]
    fn mpmath_reference_values() {
        // mpmath.loggamma at 30 digits
        let cases = [
            (c(0.5, 50.0), c(-77.620877806540158, 145.60198362418754)),
            (c(-2.5, 0.3), c(-0.43208889261320192, -9.0933454212897415)),
            (c(0.25, -1000.0), c(-1571.604327073625, -5907.3625903171051)),
            (c(3.0, 4.0), c(-1.7566267846037841, 4.7426644380346579)),
        ];
        for (z, want) in cases {
            let got = log_gamma(z).unwrap();
            assert!(
                (got - want).norm() <= 1e-12 * want.norm().max(1.0),
                "{z}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn poles_are_rejected() {
        assert!(matches!(log_gamma(c(0.0, 0.0)), Err(Error::PoleOfGamma(_))));
        assert!(matches!(
            log_gamma(c(-3.0, 0.0)),
            Err(Error::PoleOfGamma(_))
        ));
        assert!(digamma(c(-1.0, 0.0)).is_err());
        assert!(log_gamma(c(-3.0, 1e-6)).is_ok());
    }

    #[test]
    fn digamma_values() {
        assert_relative_eq!(
            digamma(c(1.0, 0.0)).unwrap().re,
            -EULER_GAMMA,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            digamma(c(0.5, 0.0)).unwrap().re,
            -EULER_GAMMA - 2.0 * LN_2,
            epsilon = 1e-14
        );
        let d = digamma(c(0.75, 0.0)).unwrap() - digamma(c(0.25, 0.0)).unwrap();
        assert_relative_eq!(d.re, PI, epsilon = 1e-13);
    }

    #[test]
    fn stirling_matches_log_gamma() {
        let s = stirling_gamma(0.5, 50.0, false).unwrap();
        let g = log_gamma(c(0.5, 50.0)).unwrap().exp();
        assert!((s - g).norm() / g.norm() <= 1.0 / 50.0);
        let sc = stirling_gamma(0.5, 50.0, true).unwrap();
        assert!((sc - s.conj()).norm() <= 1e-15 * s.norm());
        let m = stirling_gamma(0.5, 3.0, false).unwrap().norm();
        assert_relative_eq!(
            m,
            (2.0 * PI).sqrt() * (-1.5 * PI).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn gamma_diff_matches_direct() {
        let w = c(0.5, 300.0);
        let h = c(0.0, -1e-3);
        let d = ln_gamma_diff(w, h).unwrap();
        let direct = log_gamma(w + h).unwrap() - log_gamma(w).unwrap();
        assert!((d - direct).norm() < 1e-10);
        let approx = h * digamma(w).unwrap();
        assert!((d - approx).norm() < 1e-8);
        let small = ln_gamma_diff(c(0.3, 2.0), c(0.0, 0.7)).unwrap();
        let direct = log_gamma(c(0.3, 2.7)).unwrap() - log_gamma(c(0.3, 2.0)).unwrap();
        assert!((small - direct).norm() < 1e-13);
    }

    proptest! {
        #[test]
        fn recurrence_holds(re in -60.0f64..60.0, im in -60.0f64..60.0) {
            let z = c(re, im);
            prop_assume!(z.im.abs() > 1e-3 || (re - re.round()).abs() > 1e-3);
            let r = (log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap()).exp();
            prop_assert!((r - z).norm() <= 1e-12 * z.norm().max(1.0));
        }

        #[test]
        fn digamma_reflection(x in 0.001f64..0.999) {
            let z = c(x, 0.0);
            let lhs = digamma(c(1.0 - x, 0.0)).unwrap() - digamma(z).unwrap();
            prop_assert!((lhs.re - PI / (PI * x).tan()).abs() <= 1e-10 * (1.0 + lhs.re.abs()));
        }

        #[test]
        fn conjugate_symmetry(re in 0.01f64..5.0, im in 0.0f64..1e4) {
            let z = c(re, im);
            let a = log_gamma(z).unwrap();
            let b = log_gamma(z.conj()).unwrap();
            prop_assert!((a - b.conj()).norm() <= 1e-15 * a.norm().max(1.0));
        }
    }
}
