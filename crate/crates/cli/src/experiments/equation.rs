use rayon::prelude::*;
use zetalab::kernel_ie::{atkinson_main_term, ie_residual, second_moment, DeltaWindow};

use super::{check, point, record, Experiment};
use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{col, Report};

pub struct VerifyIe;

impl Experiment for VerifyIe {
    fn name(&self) -> &'static str {
        "verify-ie"
    }

    fn about(&self) -> &'static str {
        "Residual of the windowed integral equation over a (sigma, t) grid"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
        let bound = cfg.tol_or(5e-2);
        let q = cfg.quad_tol_or(1e-6);
        let w = DeltaWindow::new(
            cfg.delta(1, 0.3),
            cfg.delta(2, 0.3),
            cfg.delta(3, 0.3),
            cfg.delta(4, 0.3),
        )
        .map_err(|e| ConfigError(e.to_string()))?;
        let mut grid = Vec::new();
        for s in cfg.sigmas(&[0.3, 0.5, 0.7]) {
            for t in cfg.ts(&[50.0, 100.0, 200.0]) {
                grid.push(point(s, t)?);
            }
        }
        let q_tag = format!("oracle=quadrature rel {q:e}");
        let mut report = Report::new(
            self.name(),
            vec![
                col("sigma", "input"),
                col("t", "input"),
                col("lhs", q_tag.clone()),
                col("rhs", "oracle=closed form"),
                col("rel_err", format!("tol<={bound:e}")),
                col(
                    "rel_err_tight",
                    format!("oracle=quadrature rel {:e}", q / 10.0),
                ),
                col("tail_bound", "diagnostic"),
            ],
        );
        let rows: Vec<_> = grid
            .par_iter()
            .map(|&p| (p, ie_residual(p, w, q), ie_residual(p, w, q / 10.0)))
            .collect();
        for (p, r, tight) in rows {
            let ctx = format!("sigma={} t={}", p.sigma(), p.t());
            match (r, tight) {
                (Ok(r), Ok(tight)) => {
                    check(&mut report, &ctx, r.rel_err, bound);
                    if tight.rel_err > r.rel_err {
                        report.note(format!("{ctx}: residual grew when the tolerance tightened"));
                    }
                    report.push(vec![
                        p.sigma().into(),
                        p.t().into(),
                        r.lhs.re.into(),
                        r.rhs.re.into(),
                        r.rel_err.into(),
                        tight.rel_err.into(),
                        w.tail_bound(p.t()).into(),
                    ]);
                }
                (Err(e), _) | (_, Err(e)) => record(&mut report, ctx, &e),
            }
        }
        Ok(report)
    }
}

pub struct Atkinson;

impl Experiment for Atkinson {
    fn name(&self) -> &'static str {
        "atkinson"
    }

    fn about(&self) -> &'static str {
        "Second moment on the critical line against its main term"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
        let bound = cfg.tol_or(40.0);
        let q = cfg.quad_tol_or(1e-8);
        if cfg.single_sigma(0.5)? != 0.5 {
            return Err(ConfigError(
                "the main term is stated for sigma = 1/2 only".into(),
            ));
        }
        let mut report = Report::new(
            self.name(),
            vec![
                col("T", "input"),
                col("moment", format!("oracle=quadrature abs {q:e}")),
                col("main_term", "oracle=closed form"),
                col("deviation", format!("tol<={bound}")),
            ],
        );
        let ts = cfg.ts(&[1000.0]);
        let rows: Vec<_> = ts
            .par_iter()
            .map(|&t| (t, second_moment(0.5, t, q)))
            .collect();
        for (t, r) in rows {
            match r {
                Ok(m) => {
                    let main = atkinson_main_term(t);
                    let dev = m.value.re - main;
                    check(&mut report, format!("T={t}"), dev.abs(), bound);
                    report.push(vec![t.into(), m.value.re.into(), main.into(), dev.into()]);
                }
                Err(e) => record(&mut report, format!("T={t}"), &e),
            }
        }
        Ok(report)
    }
}
