use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use zetalab::expsums::{
    check_fg_identity, check_index_cover, check_partition, check_sr_sm_relation, log_defect,
    phase_example_change_of_variables, phase_example_sum, short_range_scale, sum_g,
    sum_short_range, PhaseSumVariant,
};

use super::{check, point, record, Experiment};
use crate::config::{ConfigError, ExperimentConfig};
use crate::report::{col, Report};

pub struct Identities;

const FG_SAMPLES: usize = 50;

impl Experiment for Identities {
    fn name(&self) -> &'static str {
        "identities"
    }

    fn about(&self) -> &'static str {
        "Exact exponential-sum identities and the index-set partition"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
        let bound = cfg.tol_or(1e-10);
        let (d2, d3) = (cfg.delta(2, 0.5), cfg.delta(3, 0.5));
        let mut report = Report::new(
            self.name(),
            vec![
                col("identity", "label"),
                col("case", "input"),
                col("rel_err", format!("tol<={bound:e}")),
            ],
        );
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let fg: Vec<(Complex64, Complex64, usize)> = (0..FG_SAMPLES)
            .map(|_| {
                let u = Complex64::new(rng.gen_range(0.1..1.5), rng.gen_range(-50.0..50.0));
                let v = Complex64::new(rng.gen_range(0.1..1.5), rng.gen_range(-50.0..50.0));
                (u, v, rng.gen_range(1..=200))
            })
            .collect();
        let fg_rows: Vec<_> = fg
            .par_iter()
            .map(|&(u, v, n)| check_fg_identity(u, v, n))
            .collect();
        for (&(u, v, n), r) in fg.iter().zip(fg_rows) {
            let case = format!("u={u:.4} v={v:.4} N={n}");
            match r {
                Ok(r) => {
                    check(&mut report, format!("f-g {case}"), r.rel_err, bound);
                    report.push(vec!["f-g".into(), case.into(), r.rel_err.into()]);
                }
                Err(e) => record(&mut report, case, &e),
            }
        }
        let mut grid = Vec::new();
        for s in cfg.sigmas(&[0.3, 0.5, 0.7]) {
            for t in cfg.ts(&[50.0, 200.0, 600.0]) {
                grid.push(point(s, t)?);
            }
        }
        let rows: Vec<_> = grid
            .par_iter()
            .map(|&p| (p, check_sr_sm_relation(p), check_partition(p, d2, d3)))
            .collect();
        for (p, rel, part) in rows {
            let case = format!("sigma={} t={}", p.sigma(), p.t());
            for (label, r) in [("S_R-S_M", rel), ("partition", part)] {
                match r {
                    Ok(r) => {
                        check(&mut report, format!("{label} {case}"), r.rel_err, bound);
                        report.push(vec![label.into(), case.clone().into(), r.rel_err.into()]);
                    }
                    Err(e) => record(&mut report, format!("{label} {case}"), &e),
                }
            }
        }
        let mut ts: Vec<f64> = grid.iter().map(|p| p.t()).collect();
        ts.dedup();
        for t in ts {
            let case = format!("t={t} d2={d2} d3={d3}");
            match check_index_cover(t, d2, d3) {
                Ok(c) => {
                    let defect = (c.uncovered + c.overlapping + c.outside) as f64;
                    check(&mut report, format!("cover {case}"), defect, 0.0);
                    report.push(vec!["cover".into(), case.into(), defect.into()]);
                }
                Err(e) => record(&mut report, case, &e),
            }
        }
        Ok(report)
    }
}

pub struct PhaseExamples;

impl Experiment for PhaseExamples {
    fn name(&self) -> &'static str {
        "section7"
    }

    fn about(&self) -> &'static str {
        "Weighted sums of the stationary-phase examples and their change of variables"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
        let bound = cfg.tol_or(0.1);
        let t = cfg.single_t(60.0)?;
        let (d1, d2) = (cfg.delta(1, 0.05), cfg.delta(2, 0.3));
        let mut report = Report::new(
            self.name(),
            vec![
                col("quantity", "label"),
                col("re", "oracle=direct sum"),
                col("im", "oracle=direct sum"),
                col("abs", "oracle=direct sum"),
                col("rel_err", format!("tol<={bound}")),
            ],
        );
        for (label, v) in [
            ("shifted", PhaseSumVariant::Shifted),
            ("ratio-shifted", PhaseSumVariant::RatioShifted),
            ("ratio", PhaseSumVariant::Ratio),
        ] {
            match phase_example_sum(t, d1, d2, v) {
                Ok(s) => report.push(vec![
                    label.into(),
                    s.value.re.into(),
                    s.value.im.into(),
                    s.value.norm().into(),
                    f64::NAN.into(),
                ]),
                Err(e) => record(&mut report, label, &e),
            }
        }
        match phase_example_change_of_variables(t, d1, d2) {
            Ok(r) => {
                check(&mut report, "change of variables", r.rel_err, bound);
                report.push(vec![
                    "ratio vs conj shifted".into(),
                    (r.lhs - r.rhs).re.into(),
                    (r.lhs - r.rhs).im.into(),
                    r.abs_err.into(),
                    r.rel_err.into(),
                ]);
            }
            Err(e) => record(&mut report, "change of variables", &e),
        }
        Ok(report)
    }
}

pub struct Sums;

impl Experiment for Sums {
    fn name(&self) -> &'static str {
        "sums"
    }

    fn about(&self) -> &'static str {
        "Growth of the double sums across a height grid (non-assertive)"
    }

    fn run(&self, cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
        let d2 = cfg.delta(2, 0.5);
        let ts = cfg.ts(&[1e3, 4e3, 1.6e4]);
        let mut report = Report::new(
            self.name(),
            vec![
                col("t", "input"),
                col("abs_short_range", "diagnostic"),
                col("scale", "diagnostic"),
                col("ratio", "diagnostic"),
                col("abs_g", "diagnostic"),
                col("log_defect", "diagnostic"),
            ],
        );
        let rows: Vec<_> = ts
            .par_iter()
            .map(|&t| -> zetalab::Result<_> {
                let e = sum_short_range(t, d2)?.value.norm();
                let g = sum_g(zetalab::StripPoint::new(0.5, t)?)?.value.norm();
                Ok((e, g, log_defect(t)?))
            })
            .collect();
        for (&t, r) in ts.iter().zip(rows) {
            match r {
                Ok((e, g, ld)) => {
                    let scale = short_range_scale(t, d2);
                    report.push(vec![
                        t.into(),
                        e.into(),
                        scale.into(),
                        (e / scale).into(),
                        g.into(),
                        ld.into(),
                    ]);
                }
                Err(e) => record(&mut report, format!("t={t}"), &e),
            }
        }
        report.note("trend diagnostics only; no pass/fail bound");
        Ok(report)
    }
}
