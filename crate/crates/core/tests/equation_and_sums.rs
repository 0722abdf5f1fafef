use num_complex::Complex64;
use proptest::prelude::*;
use zetalab::expsums::*;
use zetalab::kernel_ie::*;
use zetalab::special_fn::{zeta, zeta_evaluator, zeta_evaluator_names};
use zetalab::StripPoint;

fn sp(sigma: f64, t: f64) -> StripPoint {
    StripPoint::new(sigma, t).unwrap()
}

#[test]
fn evaluators_agree_on_the_critical_line() {
    // Riemann-Siegel keeps the first two corrections, so it is good to O(t^{-5/4})
    let names = zeta_evaluator_names();
    assert!(names.len() >= 2);
    for t in [30.0, 150.0, 700.0] {
        let s = Complex64::new(0.5, t);
        let vals: Vec<Complex64> = names
            .iter()
            .map(|n| zeta_evaluator(n).unwrap().eval(s).unwrap())
            .collect();
        for v in &vals[1..] {
            assert!(
                (v - vals[0]).norm() <= 0.1 * t.powf(-1.25),
                "t={t}: {vals:?}"
            );
        }
    }
}

#[test]
fn first_zero_and_known_value() {
    // mpmath: zeta(1/2 + 14.134725141734693790i) ~ 0, zeta(2) = pi^2/6
    assert!(
        zeta(Complex64::new(0.5, 14.134725141734693790))
            .unwrap()
            .norm()
            < 1e-12
    );
    let z2 = zeta(Complex64::new(2.0, 0.0)).unwrap();
    assert!((z2.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
}

#[test]
fn single_point_residual_and_split() {
    let p = sp(0.5, 200.0);
    let w = DeltaWindow::uniform(0.3).unwrap();
    let r = ie_residual(p, w, 1e-8).unwrap();
    assert!(r.rel_err <= 5e-2);
    let parts = i_split(p, w, 1e-8).unwrap();
    let sum: Complex64 = parts.iter().map(|q| q.value).sum();
    assert!((sum - r.lhs).norm() <= 1e-6 * r.lhs.norm());
}

#[test]
fn atkinson_deviation_small() {
    let dev = atkinson_moment(1000.0, 1e-8).unwrap().value.re - atkinson_main_term(1000.0);
    assert!(dev.abs() <= 40.0, "{dev}");
}

#[test]
fn cover_and_partition_on_a_grid() {
    for t in [50.0, 333.3, 600.0] {
        for d in [0.3, 0.6] {
            assert!(check_index_cover(t, d, d).unwrap().holds);
            assert!(check_partition(sp(0.5, t), d, d).unwrap().within(1e-10));
        }
    }
    assert!(!check_index_cover_literal(50.0, 0.4, 0.4).unwrap().holds);
}

#[test]
fn phase_example_change_of_variables_close() {
    let r = phase_example_change_of_variables(60.0, 0.05, 0.3).unwrap();
    assert!(r.rel_err < 0.1, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn fg_identity_holds(ur in 0.1f64..1.5, ui in -40.0f64..40.0, vr in 0.1f64..1.5, vi in -40.0f64..40.0, n in 1usize..150) {
        let r = check_fg_identity(Complex64::new(ur, ui), Complex64::new(vr, vi), n).unwrap();
        prop_assert!(r.within(1e-10));
    }

    #[test]
    fn sr_sm_relation_holds(sigma in 0.1f64..0.9, t in 5.0f64..400.0) {
        prop_assert!(check_sr_sm_relation(sp(sigma, t)).unwrap().within(1e-10));
    }
}
