//! Numerical laboratory for the mean square of the Riemann zeta function on
//! vertical lines: special functions, oscillatory quadrature, the kernel
//! integral equation, exponential-sum identities and asymptotic formulas.

pub mod asymptotics;
pub mod error;
pub mod expsums;
pub mod kernel_ie;
pub mod quadrature;
pub mod special_fn;
pub mod summation;
pub mod types;

pub use error::{Error, Result};
pub use types::{ComplexValue, ResidualReport, StripPoint};
