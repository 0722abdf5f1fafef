//! Leading-order asymptotics of the windowed integrals and their numerical
//! cross-checks: stationary phase for J3, the Hankel closed form of J4, and
//! the pole plus steepest-descent split of E4.

mod e4;
mod j3;
mod j4;
mod stationary;

pub use e4::{
    e4_decomposed, e4_hankel, e4_in_transition, e4_numeric, e4_pole_term, e4_sd_leading,
    e4_sd_leading_flipped, e4_sweep_row, i4_tilde, E4Parts, E4SweepRow, I4Parts, SADDLE_WIDTHS,
};
pub use j3::{
    i3_direct, i3_pair_errors, i3_tilde, j3_amplitude, j3_asymptotic, j3_boundary, j3_l,
    j3_numeric, j3_phase, j3_prefactor, j3_problem, j3_reduced, j3_s, j3_stationary_band, j3_u,
    j3_window, I3Parts, J3Stationary, PairError, FRESNEL_WIDTHS,
};
pub use j4::{
    hankel_table_row, hankel_unit_residue, j4_asymptotic, j4_numeric, j4_tilde_closed,
    j4_tilde_numeric, minus_one_identity, reflection_b, reflection_closed, s_reflection,
    HankelTableRow, J4Integrand, Reflection,
};
pub use stationary::{
    phase_function, phase_function_names, stationary_phase_generic, Amplitude, EntropyPhase,
    LinearLogPhase, PhaseFunction, PhaseProblem, QuadraticPhase, SpEstimate,
};
