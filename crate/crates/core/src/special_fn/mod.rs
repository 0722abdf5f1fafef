mod gamma;
mod phase;
mod zeta;

pub use gamma::{digamma, gamma_real, ln_gamma_diff, log_gamma, stirling_gamma, EULER_GAMMA};
pub use phase::{cis_product, one_minus_y_log_plus_y, pow_neg, reduced_phase};
pub use zeta::{
    hurwitz_zeta1, riemann_siegel_theta, zeta, zeta_abs_sq, zeta_evaluator, zeta_evaluator_names,
    EulerMaclaurin, RiemannSiegel, ZetaEvaluator,
};
