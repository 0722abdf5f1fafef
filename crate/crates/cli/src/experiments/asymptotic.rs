use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use zetalab::asymptotics::{j3_reduced, j3_s, j3_u, j4_asymptotic, j4_numeric};

use super::{check, loglog_slope, point, record, Experiment};
use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{col, Report, Status};

pub struct J3;

impl Experiment for J3 {
    fn name(&self) -> &'static str {
        "j3"
    }

    fn about(&self) -> &'static str {
        "Stationary point minus upper endpoint term against the reduced integral"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
        // --tol is the required decay: slope <= -tol
        let rate = cfg.tol_or(0.4);
        let q = cfg.quad_tol_or(1e-9);
        let sigma = cfg.single_sigma(0.5)?;
        let lambda = cfg.lambda.unwrap_or(1.0);
        let (d2, d3) = (cfg.delta(2, 0.5), cfg.delta(3, 0.5));
        let grid = cfg
            .ts(&[1e3, 1e4, 1e5])
            .into_iter()
            .map(|t| point(sigma, t))
            .collect::<Result<Vec<_>, _>>()?;
        let q_tag = format!("oracle=quadrature rel {q:e}");
        let mut report = Report::new(
            self.name(),
            vec![
                col("t", "input"),
                col("reduced_re", q_tag.clone()),
                col("reduced_im", q_tag),
                col("asym_re", "leading order"),
                col("asym_im", "leading order"),
                col("rel_err", format!("slope<=-{rate}")),
            ],
        );
        let rows: Vec<_> = grid
            .par_iter()
            .map(|&p| -> zetalab::Result<_> {
                let num = j3_reduced(p, d2, d3, lambda, q)?.value;
                let asy = j3_s(p, d2, d3, lambda)?.effective() - j3_u(p, d3, lambda)?;
                Ok((num, asy))
            })
            .collect();
        let mut pts = Vec::new();
        for (p, r) in grid.iter().zip(rows) {
            match r {
                Ok((num, asy)) => {
                    let rel = (num - asy).norm() / num.norm();
                    pts.push((p.t(), rel));
                    report.push(vec![
                        p.t().into(),
                        num.re.into(),
                        num.im.into(),
                        asy.re.into(),
                        asy.im.into(),
                        rel.into(),
                    ]);
                }
                Err(e) => record(&mut report, format!("t={}", p.t()), &e),
            }
        }
        match loglog_slope(&pts) {
            Some(slope) => {
                report.note(format!("log-log error slope {slope:.4}"));
                if !(slope <= -rate) {
                    report.fail(
                        Status::ToleranceFailure,
                        format!("slope {slope:.4} above -{rate}"),
                    );
                }
            }
            None => report.note("slope needs at least two heights"),
        }
        Ok(report)
    }
}

pub struct J4;

const J4_SAMPLES: usize = 8;

impl Experiment for J4 {
    fn name(&self) -> &'static str {
        "j4"
    }

    fn about(&self) -> &'static str {
        "Principal-value quadrature of J4 against -1 + E4 on sampled (m1, m2)"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
        let bound = cfg.tol_or(1e-2);
        let q = cfg.quad_tol_or(1e-10);
        let t = cfg.single_t(1e4)?;
        let p = point(cfg.single_sigma(0.5)?, t)?;
        let (d3, d4) = (cfg.delta(3, 0.2), cfg.delta(4, 0.2));
        let n = p.floor_t();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let pairs: Vec<(usize, usize)> = (0..J4_SAMPLES)
            .map(|_| (rng.gen_range(1..=n), rng.gen_range(1..=n)))
            .collect();
        let q_tag = format!("oracle=pv quadrature rel {q:e}");
        let mut report = Report::new(
            self.name(),
            vec![
                col("m1", "input"),
                col("m2", "input"),
                col("numeric_re", q_tag.clone()),
                col("numeric_im", q_tag),
                col("asym_re", "leading order"),
                col("asym_im", "leading order"),
                col("rel_err", format!("tol<={bound:e}")),
            ],
        );
        let rows: Vec<_> = pairs
            .par_iter()
            .map(|&(m1, m2)| -> zetalab::Result<_> {
                let ratio = m1 as f64 / m2 as f64;
                let num = j4_numeric(p, d3, d4, ratio, q)?.value;
                let asy = j4_asymptotic(t, d3, ratio, q)?;
                Ok((num, asy))
            })
            .collect();
        for (&(m1, m2), r) in pairs.iter().zip(rows) {
            let ctx = format!("m1={m1} m2={m2}");
            match r {
                Ok((num, asy)) => {
                    let rel = (num - asy).norm() / asy.norm();
                    check(&mut report, &ctx, rel, bound);
                    report.push(vec![
                        m1.into(),
                        m2.into(),
                        num.re.into(),
                        num.im.into(),
                        asy.re.into(),
                        asy.im.into(),
                        rel.into(),
                    ]);
                }
                Err(e) => record(&mut report, ctx, &e),
            }
        }
        Ok(report)
    }
}
