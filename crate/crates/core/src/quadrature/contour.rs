use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::{Integrator, QuadResult};
use crate::error::{Error, Result};

/// A point on a path with the derivative of the parameterization and a
/// logarithm of `z` on the branch the path lives on.
#[derive(Debug, Clone, Copy)]
pub struct PathPoint {
    pub z: Complex64,
    pub dz: Complex64,
    pub log_z: Complex64,
}

pub type CustomMap = Arc<dyn Fn(f64) -> PathPoint + Send + Sync>;

#[derive(Clone)]
pub enum Segment {
    Line {
        from: Complex64,
        to: Complex64,
    },
    /// Arc of a circle centred at the origin, angle running over [theta0, theta1].
    Arc {
        radius: f64,
        theta0: f64,
        theta1: f64,
    },
    /// The negative real axis approached from below (`upper = false`, arg -pi)
    /// or above (`upper = true`, arg +pi), radius running from `r0` to `r1`.
    Lip {
        r0: f64,
        r1: f64,
        upper: bool,
    },
    Custom {
        map: CustomMap,
        breaks: Vec<f64>,
    },
}

impl std::fmt::Debug for Segment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Segment::Line { from, to } => write!(f, "Line({from} -> {to})"),
            Segment::Arc {
                radius,
                theta0,
                theta1,
            } => write!(f, "Arc(r={radius}, {theta0}..{theta1})"),
            Segment::Lip { r0, r1, upper } => write!(f, "Lip({r0} -> {r1}, upper={upper})"),
            Segment::Custom { breaks, .. } => write!(f, "Custom({} breaks)", breaks.len()),
        }
    }
}

impl Segment {
    pub fn point(&self, u: f64) -> PathPoint {
        match self {
            Segment::Line { from, to } => {
                let z = from + (to - from) * u;
                PathPoint {
                    z,
                    dz: to - from,
                    log_z: z.ln(),
                }
            }
            Segment::Arc {
                radius,
                theta0,
                theta1,
            } => {
                let th = theta0 + (theta1 - theta0) * u;
                let z = Complex64::from_polar(*radius, th);
                PathPoint {
                    z,
                    dz: Complex64::i() * z * (theta1 - theta0),
                    log_z: Complex64::new(radius.ln(), th),
                }
            }
            Segment::Lip { r0, r1, upper } => {
                let r = r0 + (r1 - r0) * u;
                let (im0, arg) = if *upper { (0.0, PI) } else { (-0.0, -PI) };
                PathPoint {
                    z: Complex64::new(-r, im0),
                    dz: Complex64::new(-(r1 - r0), 0.0),
                    log_z: Complex64::new(r.ln(), arg),
                }
            }
            Segment::Custom { map, .. } => map(u),
        }
    }

    fn breaks(&self) -> Vec<f64> {
        match self {
            Segment::Lip { r0, r1, .. } => {
                // panels of geometrically growing length in r for e^{-r} decay
                let (lo, hi) = (r0.min(*r1), r0.max(*r1));
                let mut out = Vec::new();
                let mut r = lo + 0.5;
                let mut step = 0.5;
                while r < hi {
                    out.push((r - r0) / (r1 - r0));
                    step *= 1.5;
                    r += step;
                }
                out
            }
            Segment::Arc { theta0, theta1, .. } => {
                let n = ((theta1 - theta0).abs() / (PI / 4.0)).ceil() as usize;
                (1..n).map(|k| k as f64 / n as f64).collect()
            }
            Segment::Custom { breaks, .. } => breaks.clone(),
            Segment::Line { .. } => Vec::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContourPath {
    segments: Vec<Segment>,
}

impl ContourPath {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("a contour needs at least one segment"));
        }
        for w in segments.windows(2) {
            let end = w[0].point(1.0).z;
            let start = w[1].point(0.0).z;
            if (end - start).norm() > 1e-12 * end.norm().max(1.0) {
                return Err(Error::invalid(format!(
                    "segments do not join: {end} vs {start}"
                )));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> PathPoint {
        self.segments[0].point(0.0)
    }

    pub fn end(&self) -> PathPoint {
        self.segments[self.segments.len() - 1].point(1.0)
    }
}

/// Hankel contour: lower lip inbound from `truncation e^{-i pi}`, circle of
/// `radius` from -pi to pi, upper lip outbound to `truncation e^{i pi}`.
pub fn hankel(radius: f64, truncation: f64) -> Result<ContourPath> {
    if !(radius > 0.0 && truncation > radius) {
        return Err(Error::invalid(format!(
            "need 0 < radius < truncation, got {radius}, {truncation}"
        )));
    }
    ContourPath::new(vec![
        Segment::Lip {
            r0: truncation,
            r1: radius,
            upper: false,
        },
        Segment::Arc {
            radius,
            theta0: -PI,
            theta1: PI,
        },
        Segment::Lip {
            r0: radius,
            r1: truncation,
            upper: true,
        },
    ])
}

/// `int f(z) dz` along the path, with `f` seeing the path's branch of ln z.
pub fn integrate_contour_branch<F>(
    f: F,
    path: &ContourPath,
    integ: &Integrator,
) -> Result<QuadResult>
where
    F: Fn(&PathPoint) -> Complex64 + Sync,
{
    let n = path.segments.len() as f64;
    let mut total = QuadResult::zero();
    for seg in &path.segments {
        let local = Integrator {
            abs_tol: integ.abs_tol / n,
            breakpoints: [integ.breakpoints.clone(), seg.breaks()].concat(),
            ..integ.clone()
        };
        let g = |u: f64| {
            let p = seg.point(u);
            f(&p) * p.dz
        };
        total = total.combine(&local.integrate(g, 0.0, 1.0)?);
    }
    Ok(total)
}

/// `int f(z) dz` along the path; on lips `z` carries a signed zero imaginary
/// part so principal-branch functions see the correct side of the cut.
pub fn integrate_contour<F>(f: F, path: &ContourPath, tol: f64) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    integrate_contour_branch(|p: &PathPoint| f(p.z), path, &Integrator::new(tol))
}
