use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expsums::{sum_over, IndexSetKind, IndexSetSpec, Weight, DESK_T_MAX};
use crate::quadrature::{hankel, integrate_contour_branch, Integrator, PathPoint, QuadResult};
use crate::special_fn::{cis_product, reduced_phase};
use crate::summation::{chunked_sum, NeumaierComplex};
use crate::types::StripPoint;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Saddle widths T^{-1/2} within which a pole counts as meeting the saddle.
pub const SADDLE_WIDTHS: f64 = 3.0;

/// (T, a) with T = t^{d3} and a = M T, so the pole sits at omega = -i/a.
fn scales(t: f64, d3: f64, m: f64) -> Result<(f64, f64)> {
    if !(t > 1.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t = {t} must exceed 1")));
    }
    if !(d3 > 0.0 && d3 < 1.0) {
        return Err(Error::invalid(format!("d3 = {d3} must lie in (0, 1)")));
    }
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::invalid(format!("M = {m} must be positive")));
    }
    let big_t = t.powf(d3);
    Ok((big_t, m * big_t))
}

fn cexpm1(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    Complex64::new(
        x.exp_m1() * y.cos() - 2.0 * (0.5 * y).sin().powi(2),
        x.exp() * y.sin(),
    )
}

/// e^d - 1 - d.
fn expm1_minus_id(d: Complex64) -> Complex64 {
    if d.norm() < 0.1 {
        let mut term = d * d * 0.5;
        let mut acc = term;
        for k in 3..24 {
            term = term * d / k as f64;
            acc += term;
        }
        acc
    } else {
        cexpm1(d) - d
    }
}

/// Inverse of e^d - 1 - d = u^2/2 near the origin.
fn delta_series(u: Complex64) -> Complex64 {
    const C: [f64; 8] = [
        1.0,
        -1.0 / 6.0,
        1.0 / 36.0,
        -1.0 / 270.0,
        1.0 / 4320.0,
        1.0 / 17010.0,
        -139.0 / 5443200.0,
        1.0 / 204120.0,
    ];
    C.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| (acc + c) * u)
}

/// The steepest-descent path through omega = -i in the variable
/// zeta = ln omega = -i pi/2 + delta, where e^delta - 1 - delta = -i w^2.
/// A table on a w-grid supplies Newton starting points along the branch.
struct SaddleMap {
    h: f64,
    neg: Vec<Complex64>,
    pos: Vec<Complex64>,
}

impl SaddleMap {
    fn new(w_min: f64, w_max: f64) -> Self {
        let h = 0.01;
        let build = |sign: f64, len: f64| {
            let n = (len / h).ceil() as usize + 2;
            let mut out = Vec::with_capacity(n);
            out.push(Complex64::new(0.0, 0.0));
            for k in 1..n {
                let w = sign * k as f64 * h;
                let guess = if k < 3 {
                    delta_series(Complex64::new(-1.0, 1.0) * w)
                } else {
                    out[k - 1] * 2.0 - out[k - 2]
                };
                out.push(Self::newton(w, guess));
            }
            out
        };
        Self {
            h,
            neg: build(-1.0, -w_min),
            pos: build(1.0, w_max),
        }
    }

    fn newton(w: f64, guess: Complex64) -> Complex64 {
        let target = I * (w * w);
        let mut d = guess;
        for _ in 0..60 {
            let step = (expm1_minus_id(d) + target) / cexpm1(d);
            d -= step;
            if step.norm() <= 1e-15 * d.norm().max(1.0) {
                break;
            }
        }
        d
    }

    fn delta(&self, w: f64) -> Complex64 {
        let u = Complex64::new(-1.0, 1.0) * w;
        if u.norm() < 0.1 {
            return delta_series(u);
        }
        let table = if w < 0.0 { &self.neg } else { &self.pos };
        let k = ((w.abs() / self.h).round() as usize).min(table.len() - 1);
        Self::newton(w, table[k])
    }
}

/// The E4 integrand integrated along the steepest-descent path, closed by the upper
/// lip from omega = -1/e, without any pole contribution.
fn e4_path(big_t: f64, a: f64, tol: f64) -> Result<QuadResult> {
    let ln_a = a.ln();
    if ln_a.abs() < 1e-9 {
        return Err(Error::PoleOnContour(Complex64::new(0.0, -1.0)));
    }
    let w_min = -(60.0 / big_t).sqrt();
    let w_end = (1.5 * PI + 1.0 / E).sqrt();
    let map = SaddleMap::new(w_min.min(-0.5), w_end);
    let f = |w: f64| {
        let d = map.delta(w);
        let zeta = Complex64::new(0.0, -FRAC_PI_2) + d;
        let den = Complex64::new(FRAC_PI_2, 0.0) - I * (zeta + ln_a);
        let jac = if w == 0.0 {
            Complex64::new(-1.0, 1.0)
        } else {
            -2.0 * I * w / cexpm1(d)
        };
        jac * ((-big_t * w * w).exp() / PI) / den
    };
    let scale = big_t.powf(-0.5) / (1.0 + ln_a.abs());
    let g = ln_a.abs();
    let mut pts = vec![0.0];
    for k in [0.25, 1.0, 4.0] {
        for s in [-1.0, 1.0] {
            let x = s * k * g;
            if x > w_min && x < w_end {
                pts.push(x);
            }
        }
    }
    let integ = Integrator::new(tol * 1e-2 * scale)
        .rel_tol(tol)
        .max_subdivisions(20_000)
        .breakpoints(pts);
    let path = integ.integrate(f, w_min, w_end)?;
    let lip = |r: f64| {
        let den = Complex64::new(1.5 * PI, -(ln_a + r.ln()));
        Complex64::from_polar(
            (-big_t * (r + 1.5 * PI)).exp() / (PI * r),
            big_t * (1.0 + r.ln()),
        ) / den
    };
    let r0 = 1.0 / E;
    let tail =
        Integrator::new(tol * 1e-2 * scale)
            .rel_tol(tol)
            .integrate(lip, r0, r0 + 40.0 / big_t)?;
    Ok(path.combine(&tail).scale(cis_product(big_t, ln_a - 1.0)))
}

/// 2 e^{-i/M} when the pole -i/a lies between the radius 1/T circle and the
/// saddle, i.e. 1 < a < T (equivalently m1/m2 in (t^{1-d3}, t)).
pub fn e4_pole_term(t: f64, d3: f64, m: f64) -> Result<Option<Complex64>> {
    let (big_t, a) = scales(t, d3, m)?;
    Ok((a > 1.0 && a < big_t).then(|| cis_product(-1.0, 1.0 / m) * 2.0))
}

/// E4 evaluated along the steepest-descent path plus the residue term.
pub fn e4_numeric(t: f64, d3: f64, m: f64, tol: f64) -> Result<QuadResult> {
    let (big_t, a) = scales(t, d3, m)?;
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if (a / big_t - 1.0).abs() < 1e-12 {
        return Err(Error::PoleOnContour(Complex64::new(0.0, -1.0 / m)));
    }
    let mut r = e4_path(big_t, a, tol)?;
    if let Some(p) = e4_pole_term(t, d3, m)? {
        r.value += p;
    }
    Ok(r)
}

/// E4 on the literal Hankel contour in omega with circle `radius`
/// (1/T reproduces the original z-contour of radius 1). Refuses when the
/// integrand's peak exceeds the result by more than the tolerance allows.
pub fn e4_hankel(t: f64, d3: f64, m: f64, radius: f64, tol: f64) -> Result<QuadResult> {
    let (big_t, a) = scales(t, d3, m)?;
    if !(radius > 0.0) {
        return Err(Error::invalid(format!(
            "radius = {radius} must be positive"
        )));
    }
    if (radius * a - 1.0).abs() < 1e-12 {
        return Err(Error::PoleOnContour(Complex64::new(0.0, -1.0 / a)));
    }
    let ln_a = a.ln();
    let f = |pt: &PathPoint| {
        let lz = pt.log_z + ln_a;
        let ex = (pt.z - FRAC_PI_2 + I * lz) * big_t;
        ex.exp() / (pt.z * (Complex64::new(FRAC_PI_2, 0.0) - I * lz) * PI)
    };
    let peak = (big_t * (FRAC_PI_2 - radius)).max(0.0).exp();
    let integ = Integrator::new(tol * 1e-3 * big_t.powf(-0.5))
        .rel_tol(tol)
        .max_subdivisions(20_000);
    let r = integrate_contour_branch(f, &hankel(radius, radius + 50.0 / big_t)?, &integ)?;
    let cond = peak / r.value.norm().max(f64::MIN_POSITIVE);
    if cond * f64::EPSILON > tol {
        return Err(Error::Cancellation { cond, tol });
    }
    Ok(r)
}

/// Leading steepest-descent value
/// -sqrt(2/pi) e^{i pi/4} T^{-1/2} e^{iT(ln a - 1)} / ln a.
pub fn e4_sd_leading(t: f64, d3: f64, m: f64) -> Result<Complex64> {
    let (big_t, a) = scales(t, d3, m)?;
    let ln_a = a.ln();
    if ln_a == 0.0 {
        return Err(Error::TransitionZone("pole on the saddle (a = 1)".into()));
    }
    let amp = -(2.0 / PI).sqrt() * big_t.powf(-0.5) / ln_a;
    Ok(Complex64::from_polar(amp, FRAC_PI_4) * cis_product(big_t, ln_a - 1.0))
}

/// The leading term with the opposite orientation of the saddle crossing.
/// Diagnostic only; the sweep shows it has the wrong sign.
pub fn e4_sd_leading_flipped(t: f64, d3: f64, m: f64) -> Result<Complex64> {
    Ok(-e4_sd_leading(t, d3, m)?)
}

/// | |omega_p| - 1 | < SADDLE_WIDTHS T^{-1/2}.
pub fn e4_in_transition(big_t: f64, a: f64) -> bool {
    (1.0 / a - 1.0).abs() < SADDLE_WIDTHS * big_t.powf(-0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct E4Parts {
    pub big_t: f64,
    pub a: f64,
    pub pole: Option<Complex64>,
    pub saddle: Complex64,
    pub total: Complex64,
}

/// Pole term (when present) plus the leading saddle value.
pub fn e4_decomposed(t: f64, d3: f64, m: f64) -> Result<E4Parts> {
    let (big_t, a) = scales(t, d3, m)?;
    if e4_in_transition(big_t, a) {
        return Err(Error::TransitionZone(format!(
            "pole -i/{a} within {SADDLE_WIDTHS} widths of the saddle at T = {big_t}"
        )));
    }
    let pole = e4_pole_term(t, d3, m)?;
    let saddle = e4_sd_leading(t, d3, m)?;
    Ok(E4Parts {
        big_t,
        a,
        pole,
        saddle,
        total: saddle + pole.unwrap_or_default(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct E4SweepRow {
    pub a: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_lhs: f64,
    pub abs_rhs: f64,
    pub rel_err: f64,
    pub pole: bool,
}

/// E4 by quadrature against pole + leading saddle at M = a t^{-d3}.
pub fn e4_sweep_row(t: f64, d3: f64, a: f64, tol: f64) -> Result<E4SweepRow> {
    let m = a * t.powf(-d3);
    let parts = e4_decomposed(t, d3, m)?;
    let lhs = e4_numeric(t, d3, m, tol)?.value;
    let rhs = parts.total;
    Ok(E4SweepRow {
        a,
        lhs,
        rhs,
        abs_lhs: lhs.norm(),
        abs_rhs: rhs.norm(),
        rel_err: (rhs - lhs).norm() / lhs.norm(),
        pole: parts.pole.is_some(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct I4Parts {
    /// -sum sum m1^{-s} m2^{-conj s}.
    pub constant: f64,
    /// 2 Re S_4^P over M_4.
    pub pole: f64,
    /// Re sum sum m1^{-s} m2^{-conj s} E4^SD over pairs outside the transition band.
    pub saddle: f64,
    pub total: f64,
    pub skipped_pairs: u64,
}

/// Three-part leading-order assembly of I4.
pub fn i4_tilde(p: StripPoint, d3: f64, d4: f64) -> Result<I4Parts> {
    let (sigma, t) = (p.sigma(), p.t());
    for (name, d) in [("d3", d3), ("d4", d4)] {
        if !(d > 0.0 && d < 0.5) {
            return Err(Error::invalid(format!("{name} = {d} must lie in (0, 1/2)")));
        }
    }
    if t > DESK_T_MAX {
        return Err(Error::DeskScaleExceeded(format!(
            "t = {t} exceeds {DESK_T_MAX} for a full double sum"
        )));
    }
    let square = IndexSetSpec::new(IndexSetKind::FullSquare, t)?;
    let constant = -sum_over(&square, Weight::Plain, p).value.re;
    let pole = 2.0
        * sum_over(
            &IndexSetSpec::new(IndexSetKind::M4 { d3 }, t)?,
            Weight::S4p,
            p,
        )
        .value
        .re;
    let n = square.n();
    let big_t = t.powf(d3);
    let ln_shift = (d3 - 1.0) * t.ln();
    let logs: Vec<f64> = (0..=n).map(|m| (m.max(1) as f64).ln()).collect();
    let skipped = std::sync::atomic::AtomicU64::new(0);
    let acc = chunked_sum(n, 16, true, |i, acc: &mut NeumaierComplex| {
        let m1 = i + 1;
        for m2 in 1..=n {
            let ln_a = logs[m1] - logs[m2] + ln_shift;
            if e4_in_transition(big_t, ln_a.exp()) {
                skipped.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                continue;
            }
            // m1^{-s} m2^{-conj s} a^{iT} / ln a
            let w = (-sigma * (logs[m1] + logs[m2])).exp() / ln_a;
            let ph = reduced_phase(t - big_t, logs[m2] - logs[m1]) + reduced_phase(big_t, ln_shift);
            acc.add(Complex64::from_polar(w, ph));
        }
    });
    let c = Complex64::from_polar(-(2.0 / PI).sqrt() * big_t.powf(-0.5), FRAC_PI_4 - big_t);
    let saddle = (c * acc.value()).re;
    Ok(I4Parts {
        constant,
        pole,
        saddle,
        total: constant + pole + saddle,
        skipped_pairs: skipped.into_inner(),
    })
}
