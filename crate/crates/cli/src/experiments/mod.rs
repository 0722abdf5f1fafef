use zetalab::{Error, StripPoint};

use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{Report, Status};

mod asymptotic;
mod equation;
mod sums;
mod tables;

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn run(&self, cfg: &ExperimentConfig) -> Result<Report, ConfigError>;
}

pub fn registry() -> Vec<Box<dyn Experiment>> {
    vec![
        Box::new(equation::VerifyIe),
        Box::new(tables::HankelTable),
        Box::new(tables::E4Sweep),
        Box::new(sums::Identities),
        Box::new(equation::Atkinson),
        Box::new(asymptotic::J3),
        Box::new(asymptotic::J4),
        Box::new(sums::PhaseExamples),
        Box::new(sums::Sums),
    ]
}

pub fn find(name: &str) -> Option<Box<dyn Experiment>> {
    registry().into_iter().find(|e| e.name() == name)
}

pub(crate) fn point(sigma: f64, t: f64) -> Result<StripPoint, ConfigError> {
    StripPoint::new(sigma, t).map_err(|e| ConfigError(e.to_string()))
}

/// Row-level errors: bad inputs are config errors, everything else is a
/// numerical failure.
pub(crate) fn record(report: &mut Report, ctx: impl std::fmt::Display, e: &Error) {
    let status = match e {
        Error::InvalidInput(_) | Error::DeskScaleExceeded(_) => Status::ConfigError,
        _ => Status::NonConvergence,
    };
    report.fail(status, format!("{ctx}: {e}"));
}

pub(crate) fn check(report: &mut Report, ctx: impl std::fmt::Display, value: f64, bound: f64) {
    if !(value <= bound) {
        report.fail(
            Status::ToleranceFailure,
            format!("{ctx}: {value:e} exceeds {bound:e}"),
        );
    }
}

/// Least-squares slope of ln y against ln x.
pub(crate) fn loglog_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let lx: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_and_complete() {
        let names: Vec<&str> = registry().iter().map(|e| e.name()).collect();
        assert_eq!(
            names,
            [
                "verify-ie",
                "appendix-a",
                "appendix-b",
                "identities",
                "atkinson",
                "j3",
                "j4",
                "section7",
                "sums"
            ]
        );
        assert!(find("j4").is_some());
        assert!(find("j5").is_none());
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1e3, 1e4, 1e5]
            .iter()
            .map(|&t: &f64| (t, 3.0 * t.powf(-0.5)))
            .collect();
        assert!((loglog_slope(&pts).unwrap() + 0.5).abs() < 1e-12);
        assert!(loglog_slope(&pts[..1]).is_none());
    }
}
