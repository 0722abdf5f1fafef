use num_complex::Complex64;

const TWO_PI_HI: f64 = std::f64::consts::TAU;
const TWO_PI_LO: f64 = 2.449_293_598_294_706_4e-16;

/// `t * l` reduced modulo 2 pi, keeping the rounding error of the product.
pub fn reduced_phase(t: f64, l: f64) -> f64 {
    let p = t * l;
    if p.abs() < 64.0 {
        return p;
    }
    let e = t.mul_add(l, -p);
    let k = (p / TWO_PI_HI).round();
    let r = (-k).mul_add(TWO_PI_HI, p);
    r - k * TWO_PI_LO + e
}

/// `exp(i * t * l)` with the phase reduced before the trigonometric call.
pub fn cis_product(t: f64, l: f64) -> Complex64 {
    Complex64::from_polar(1.0, reduced_phase(t, l))
}

/// `x^{-s} = exp(-s ln x)` given `ln x`.
pub fn pow_neg(s: Complex64, ln_x: f64) -> Complex64 {
    (-s.re * ln_x).exp() * cis_product(-s.im, ln_x)
}

/// `(1 - y) ln(1 - y) + y`, accurate for small `y`.
pub fn one_minus_y_log_plus_y(y: f64) -> f64 {
    if y.abs() < 0.05 {
        // sum_{k>=2} y^k / (k (k-1))
        let mut term = y * y;
        let mut acc = 0.0;
        for k in 2..40 {
            let add = term / (k * (k - 1)) as f64;
            acc += add;
            if add.abs() < 1e-18 * acc.abs() {
                break;
            }
            term *= y;
        }
        acc
    } else {
        (1.0 - y) * (-y).ln_1p() + y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_phase_agrees_with_naive_for_small_products() {
        assert_eq!(reduced_phase(2.0, 3.0), 6.0);
        let r = reduced_phase(1e6, 10.0f64.ln());
        let naive = (1e6 * 10.0f64.ln()).rem_euclid(std::f64::consts::TAU);
        let d = (r - naive).rem_euclid(std::f64::consts::TAU);
        assert!(d.min(std::f64::consts::TAU - d) < 1e-8);
    }

    #[test]
    fn one_minus_y_series_matches_reference() {
        // mpmath, 30 digits
        let cases = [
            (1e-3, 5.001667500500334e-7),
            (0.01, 5.016750503357323e-5),
            (0.049, 1.220603168653844e-3),
            (-0.03, 4.455663087907348e-4),
            (0.2, 2.14851589486322e-2),
            (-0.5, 0.1081976621622466),
        ];
        for (y, want) in cases {
            assert!(
                (one_minus_y_log_plus_y(y) - want).abs() <= 1e-14 * want,
                "{y}"
            );
        }
    }
}
