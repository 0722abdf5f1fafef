use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::e4::e4_numeric;
use crate::error::{Error, Result};
use crate::kernel_ie::ln_kernel_offset;
use crate::quadrature::{
    hankel, integrate_contour, Integrator, PvRule, QuadResult, SymmetricPairing,
};
use crate::special_fn::one_minus_y_log_plus_y;
use crate::summation::chunked_sum;
use crate::types::{ResidualReport, StripPoint};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_a(a: Complex64) -> Result<()> {
    if !(a.re.is_finite() && a.im.is_finite()) || a.norm() == 0.0 {
        return Err(Error::invalid(format!(
            "A = {a} must be finite and nonzero"
        )));
    }
    if a.im == 0.0 && a.re < 0.0 {
        return Err(Error::invalid(format!(
            "A = {a} lies on the branch cut of ln"
        )));
    }
    Ok(())
}

/// b = 1/4 - (i / 2 pi) ln A.
pub fn reflection_b(a: Complex64) -> Complex64 {
    Complex64::new(0.25, 0.0) - I * a.ln() / (2.0 * PI)
}

/// (i/2)(-1 + 2/(1 - iA)).
pub fn reflection_closed(a: Complex64) -> Result<Complex64> {
    check_a(a)?;
    let den = Complex64::new(1.0, 0.0) - I * a;
    if den.norm() < 1e-14 {
        return Err(Error::SingularReflection(reflection_b(a)));
    }
    Ok(I * 0.5 * (Complex64::new(-1.0, 0.0) + 2.0 / den))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reflection {
    pub b: Complex64,
    /// Partial sum plus tail estimate.
    pub series: Complex64,
    pub tail: Complex64,
    pub closed: Complex64,
    pub terms: usize,
}

impl Reflection {
    pub fn report(&self) -> ResidualReport {
        ResidualReport::new(self.series, self.closed)
    }
}

/// (1/2pi) sum_{k>=0} (1/(k+1-b) - 1/(k+b)) summed to `terms` with a tail
/// estimate, next to its closed form.
pub fn s_reflection(a: Complex64, terms: usize) -> Result<Reflection> {
    let closed = reflection_closed(a)?;
    if terms == 0 {
        return Err(Error::invalid("need at least one term"));
    }
    let b = reflection_b(a);
    let num = 2.0 * b - 1.0;
    let acc = chunked_sum(terms, 4096, true, |k, acc| {
        let k = k as f64;
        acc.add(num / ((k + 1.0 - b) * (k + b)));
    });
    // sum_{k>=K} 1/((k+1/2)^2 - c^2) = 1/K + (c^2 - 1/4)/(3K^3) + O(K^-5)
    let c = b - 0.5;
    let kk = terms as f64;
    let tail = num * (1.0 / kk + (c * c - 0.25) / (3.0 * kk.powi(3)));
    Ok(Reflection {
        b,
        series: (acc.value() + tail) / (2.0 * PI),
        tail: tail / (2.0 * PI),
        closed,
        terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum J4Integrand {
    /// With the factor (1-x/t)^{sigma-1/2} e^{ix} (1-x/t)^{i(t-x)}.
    Full,
    /// That factor replaced by 1.
    Leading,
}

/// e^{pi x/2} A^{ix} / (e^{-pi x} - e^{pi x}) with the exponentials combined
/// so that nothing overflows before the final product.
fn j4_weight(x: f64, ln_abs: f64, arg: f64) -> Complex64 {
    let (re_exp, den) = if x > 0.0 {
        (-FRAC_PI_2 * x - x * arg, (-2.0 * PI * x).exp_m1())
    } else {
        (1.5 * PI * x - x * arg, -(2.0 * PI * x).exp_m1())
    };
    Complex64::from_polar(re_exp.exp() / den, x * ln_abs)
}

fn check_deltas(d3: f64, d4: f64) -> Result<()> {
    for (name, d) in [("d3", d3), ("d4", d4)] {
        if !(d > 0.0 && d < 0.5) {
            return Err(Error::invalid(format!("{name} = {d} must lie in (0, 1/2)")));
        }
    }
    Ok(())
}

/// Principal value over [-t^{d4}, t^{d3}] of the Hankel-reduced integrand.
pub fn j4_tilde_numeric(
    p: StripPoint,
    d3: f64,
    d4: f64,
    a: Complex64,
    which: J4Integrand,
    tol: f64,
) -> Result<QuadResult> {
    check_a(a)?;
    check_deltas(d3, d4)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let (sigma, t) = (p.sigma(), p.t());
    let (ln_abs, arg) = (a.norm().ln(), a.arg());
    let f = move |x: f64| {
        let w = j4_weight(x, ln_abs, arg);
        match which {
            J4Integrand::Leading => w,
            J4Integrand::Full => {
                let y = x / t;
                w * Complex64::from_polar(
                    ((sigma - 0.5) * (-y).ln_1p()).exp(),
                    t * one_minus_y_log_plus_y(y),
                )
            }
        }
    };
    let (lo, hi) = (-t.powf(d4), t.powf(d3));
    let integ = Integrator::new(1e-200)
        .rel_tol(tol)
        .max_subdivisions(20_000);
    SymmetricPairing.integrate(&integ, &f, lo, hi, 0.0)
}

/// (i/2)(-1 + 2/(1-iA)) + e^{i t^{d3} ln A} e^{-pi t^{d3}/2} / (pi/2 - i ln A).
pub fn j4_tilde_closed(t: f64, d3: f64, a: Complex64) -> Result<Complex64> {
    let s = reflection_closed(a)?;
    let big_t = t.powf(d3);
    let ln_a = a.ln();
    let second = Complex64::from_polar((-big_t * (ln_a.im + FRAC_PI_2)).exp(), big_t * ln_a.re);
    Ok(s + second / (Complex64::new(FRAC_PI_2, 0.0) - I * ln_a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HankelTableRow {
    pub a: Complex64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub rel_err: f64,
    /// The same comparison with the leading integrand.
    pub leading_lhs: Complex64,
    pub leading_rel_err: f64,
}

pub fn hankel_table_row(
    p: StripPoint,
    d3: f64,
    d4: f64,
    a: Complex64,
    tol: f64,
) -> Result<HankelTableRow> {
    let rhs = j4_tilde_closed(p.t(), d3, a)?;
    let lhs = j4_tilde_numeric(p, d3, d4, a, J4Integrand::Full, tol)?.value;
    let leading_lhs = j4_tilde_numeric(p, d3, d4, a, J4Integrand::Leading, tol)?.value;
    Ok(HankelTableRow {
        a,
        lhs,
        rhs,
        rel_err: (lhs - rhs).norm() / rhs.norm(),
        leading_lhs,
        leading_rel_err: (leading_lhs - rhs).norm() / rhs.norm(),
    })
}

/// (1/pi) PV int_{-t^{d4}}^{t^{d3}} Gamma(ix) Gamma(s-ix)/Gamma(s) (m1/m2)^{ix} dx.
pub fn j4_numeric(p: StripPoint, d3: f64, d4: f64, ratio: f64, tol: f64) -> Result<QuadResult> {
    check_deltas(d3, d4)?;
    if !(ratio > 0.0 && ratio.is_finite()) {
        return Err(Error::invalid(format!(
            "ratio m1/m2 = {ratio} must be positive"
        )));
    }
    let t = p.t();
    let ln_r = ratio.ln();
    let f = |x: f64| match ln_kernel_offset(p, x) {
        Ok(l) => (l + I * (x * ln_r)).exp() / PI,
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    };
    let (lo, hi) = (-t.powf(d4), t.powf(d3));
    let integ = Integrator::new(tol * 1e-3)
        .rel_tol(tol)
        .max_subdivisions(20_000);
    SymmetricPairing.integrate(&integ, &f, lo, hi, 0.0)
}

/// -1 + E4(t, d3, M) with M = (m1/m2)/t, the leading form of J4.
pub fn j4_asymptotic(t: f64, d3: f64, ratio: f64, tol: f64) -> Result<Complex64> {
    Ok(e4_numeric(t, d3, ratio / t, tol)?.value - 1.0)
}

/// int_{H_1} e^z / z dz, which equals 2 pi i.
pub fn hankel_unit_residue(tol: f64) -> Result<QuadResult> {
    integrate_contour(|z| z.exp() / z, &hankel(1.0, 45.0)?, tol)
}

/// (i/2pi) int_{H_1} e^z/z (-1 + 2/(1 - i kappa z)) dz, which equals -1 when
/// the pole -i/kappa lies outside the unit circle.
pub fn minus_one_identity(kappa: f64, tol: f64) -> Result<QuadResult> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::invalid(format!(
            "kappa = {kappa} must lie in (0, 1)"
        )));
    }
    let r = integrate_contour(
        |z| {
            z.exp() / z
                * (Complex64::new(-1.0, 0.0) + 2.0 / (Complex64::new(1.0, 0.0) - I * kappa * z))
        },
        &hankel(1.0, 45.0)?,
        tol,
    )?;
    Ok(r.scale(I / (2.0 * PI)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reflection_special_values() {
        assert!(reflection_closed(c(0.0, 1.0)).unwrap().norm() < 1e-15);
        assert!((reflection_closed(c(1.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-15);
        assert!(matches!(
            reflection_closed(c(0.0, -1.0)),
            Err(Error::SingularReflection(_))
        ));
        assert!(reflection_closed(c(-2.0, 0.0)).is_err());
        assert!(reflection_closed(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn reflection_series_tail() {
        let r = s_reflection(c(2.0, 3.0), 1000).unwrap();
        assert!(r.report().abs_err < 1e-14, "{:?}", r.report());
        assert!(s_reflection(c(2.0, 3.0), 0).is_err());
    }

    #[test]
    fn hankel_table_rows() {
        let p = StripPoint::new(0.5, 1e7).unwrap();
        for a in [c(1.0, 0.0), c(2.0, 3.0), c(0.5, -0.5)] {
            let row = hankel_table_row(p, 0.25, 0.25, a, 1e-12).unwrap();
            assert!(
                row.leading_rel_err < 1e-10,
                "A={a}: {}",
                row.leading_rel_err
            );
            assert!(row.rel_err < 1e-6, "A={a}: {}", row.rel_err);
        }
    }

    #[test]
    fn window_exponents_checked() {
        let p = StripPoint::new(0.5, 1e4).unwrap();
        assert!(j4_tilde_numeric(p, 0.5, 0.2, c(1.0, 0.0), J4Integrand::Leading, 1e-8).is_err());
        assert!(j4_numeric(p, 0.2, 0.0, 2.0, 1e-8).is_err());
        assert!(j4_numeric(p, 0.2, 0.2, -2.0, 1e-8).is_err());
    }

    #[test]
    fn j4_matches_e4_form() {
        let p = StripPoint::new(0.5, 1e4).unwrap();
        for ratio in [1.0, 500.0, 0.01, 6667.0] {
            let num = j4_numeric(p, 0.2, 0.2, ratio, 1e-10).unwrap().value;
            let asy = j4_asymptotic(1e4, 0.2, ratio, 1e-10).unwrap();
            assert!(
                (num - asy).norm() / asy.norm() < 0.01,
                "ratio={ratio}: {num} vs {asy}"
            );
        }
    }

    #[test]
    fn hankel_identities() {
        let r = hankel_unit_residue(1e-12).unwrap().value;
        assert!((r - c(0.0, 2.0 * PI)).norm() < 1e-12);
        let m = minus_one_identity(0.3, 1e-12).unwrap().value;
        assert!((m - c(-1.0, 0.0)).norm() < 1e-12);
        assert!(minus_one_identity(1.5, 1e-12).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn series_matches_closed_form(r in 0.05f64..20.0, th in -3.0f64..3.0) {
            let a = Complex64::from_polar(r, th);
            prop_assume!((Complex64::new(1.0, 0.0) - I * a).norm() > 0.05);
            let s = s_reflection(a, 2000).unwrap();
            prop_assert!((s.series - s.closed).norm() < 1e-10 * (1.0 + s.closed.norm()));
        }
    }
}
