use num_complex::Complex64;
use thiserror::Error;

use crate::quadrature::QuadResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("gamma has a pole at z = {0}")]
    PoleOfGamma(Complex64),

    #[error("zeta has a pole at s = 1")]
    ZetaPole,

    #[error("quadrature did not converge (estimate {:e} +/- {:e} after {} evaluations)", best.value, best.abs_error, best.evaluations)]
    NonConvergence { best: QuadResult },

    #[error("principal value does not exist: integrand grows faster than 1/(x-c) near c = {0}")]
    PvDivergence(f64),

    #[error("transition zone: {0}")]
    TransitionZone(String),

    #[error("desk-scale limit exceeded: {0}")]
    DeskScaleExceeded(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("reflection series is singular at b = {0}")]
    SingularReflection(Complex64),

    #[error("pole lies on the integration contour at z = {0}")]
    PoleOnContour(Complex64),

    #[error("phase has no stationary point in ({0}, {1})")]
    NoStationaryPoint(f64, f64),

    #[error(
        "cancellation too severe: condition estimate {cond:e} exceeds budget for tolerance {tol:e}"
    )]
    Cancellation { cond: f64, tol: f64 },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
