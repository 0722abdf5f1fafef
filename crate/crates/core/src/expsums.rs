//! Finite double Dirichlet-type sums over ratio-constrained index sets and
//! the exact identities relating them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{cis_product, pow_neg};
use crate::summation::{chunked_sum, NeumaierComplex};
use crate::types::{ResidualReport, StripPoint};

/// Largest height accepted for sums over the full square.
pub const DESK_T_MAX: f64 = 2.0e4;

const ROW_CHUNK: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumValue {
    pub value: Complex64,
    pub terms: u64,
    pub compensation: f64,
}

impl SumValue {
    fn from_acc(acc: &NeumaierComplex) -> Self {
        Self {
            value: acc.value(),
            terms: acc.terms(),
            compensation: acc.compensation(),
        }
    }
}

/// How `[x]` treats arguments within 1e-9 of an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Boundary {
    #[default]
    Floor,
    Round,
}

impl Boundary {
    fn near(x: f64) -> Option<f64> {
        let r = x.round();
        ((x - r).abs() < 1e-9).then_some(r)
    }

    /// Smallest integer strictly greater than `x`.
    fn above(self, x: f64) -> i64 {
        match (self, Self::near(x)) {
            (Boundary::Round, Some(r)) => (r as i64).saturating_add(1),
            _ => (x.floor() as i64).saturating_add(1),
        }
    }

    /// Largest integer strictly less than `x`.
    fn below(self, x: f64) -> i64 {
        match (self, Self::near(x)) {
            (Boundary::Round, Some(r)) => (r as i64).saturating_sub(1),
            _ => (x.ceil() as i64).saturating_sub(1),
        }
    }

    /// Largest integer not exceeding `x`.
    fn at_most(self, x: f64) -> i64 {
        match (self, Self::near(x)) {
            (Boundary::Round, Some(r)) => r as i64,
            _ => x.floor() as i64,
        }
    }

    /// Smallest integer not below `x`.
    fn at_least(self, x: f64) -> i64 {
        match (self, Self::near(x)) {
            (Boundary::Round, Some(r)) => r as i64,
            _ => x.ceil() as i64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumOptions {
    pub parallel: bool,
    pub boundary: Boundary,
}

impl Default for SumOptions {
    fn default() -> Self {
        Self {
            parallel: true,
            boundary: Boundary::Floor,
        }
    }
}

/// Index sets, each a subset of `[1, N]^2` with `N = [t]` (the strip `G`
/// uses `m2` in `N+1..=N+m1`). `lambda` is `m2 / m1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum IndexSetKind {
    FullSquare,
    /// `lambda in (1/(t^{1-d3}-1), t^{1-d2}-1)`.
    M {
        d2: f64,
        d3: f64,
    },
    /// `lambda >= t^{1-d2}-1`, the part of the square above `M`.
    M2 {
        d2: f64,
    },
    /// `lambda <= 1/(t^{1-d3}-1)` and `lambda < t^{1-d2}-1`.
    M3 {
        d2: f64,
        d3: f64,
    },
    /// `m1/m2 in (t^{1-d3}, t)`.
    M4 {
        d3: f64,
    },
    /// `lambda in (t^{1-d2}-1, t^{1-d1}-1)`.
    ExampleN {
        d1: f64,
        d2: f64,
    },
    /// `lambda in (t^{d1-1}, t^{d2-1})`.
    ExampleM {
        d1: f64,
        d2: f64,
    },
    /// `lambda = t^{d3-1}(1 + O(t^{-d3/2}))`, band half-width `c t^{-d3/2}`.
    Mr {
        d3: f64,
        c: f64,
    },
    GStrip,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndexSetSpec {
    pub kind: IndexSetKind,
    pub t: f64,
}

#[derive(Debug, Clone, Copy)]
enum Rows {
    Full,
    /// `lo < lambda < hi`.
    Open(f64, f64),
    /// `lambda >= lo`.
    AtLeast(f64),
    /// `lambda <= hi` and `lambda < strict`.
    AtMost(f64, f64),
    Strip,
}

fn check_delta(name: &str, d: f64) -> Result<()> {
    if d > 0.0 && d < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {d} must lie in (0, 1)")))
    }
}

/// `1/(t^{1-d3}-1)`, infinite when the denominator is not positive.
fn m_lower(t: f64, d3: f64) -> f64 {
    let den = t.powf(1.0 - d3) - 1.0;
    if den > 0.0 {
        1.0 / den
    } else {
        f64::INFINITY
    }
}

impl IndexSetSpec {
    pub fn new(kind: IndexSetKind, t: f64) -> Result<Self> {
        if !(t >= 1.0 && t.is_finite()) {
            return Err(Error::invalid(format!("t = {t} must be finite and >= 1")));
        }
        match kind {
            IndexSetKind::FullSquare => {
                if t > DESK_T_MAX {
                    return Err(Error::DeskScaleExceeded(format!(
                        "full square at t = {t} exceeds the cap {DESK_T_MAX}"
                    )));
                }
            }
            IndexSetKind::M { d2, d3 } | IndexSetKind::M3 { d2, d3 } => {
                check_delta("d2", d2)?;
                check_delta("d3", d3)?;
            }
            IndexSetKind::M2 { d2 } => check_delta("d2", d2)?,
            IndexSetKind::M4 { d3 } => check_delta("d3", d3)?,
            IndexSetKind::ExampleN { d1, d2 } | IndexSetKind::ExampleM { d1, d2 } => {
                check_delta("d1", d1)?;
                check_delta("d2", d2)?;
                if d1 > d2 {
                    return Err(Error::invalid(format!("d1 = {d1} exceeds d2 = {d2}")));
                }
            }
            IndexSetKind::Mr { d3, c } => {
                check_delta("d3", d3)?;
                if !(c > 0.0 && c.is_finite()) {
                    return Err(Error::invalid(format!(
                        "band constant c = {c} must be positive"
                    )));
                }
            }
            IndexSetKind::GStrip => {}
        }
        Ok(Self { kind, t })
    }

    pub fn n(&self) -> usize {
        self.t.floor() as usize
    }

    fn rows(&self) -> Rows {
        let t = self.t;
        match self.kind {
            IndexSetKind::FullSquare => Rows::Full,
            IndexSetKind::M { d2, d3 } => Rows::Open(m_lower(t, d3), t.powf(1.0 - d2) - 1.0),
            IndexSetKind::M2 { d2 } => Rows::AtLeast(t.powf(1.0 - d2) - 1.0),
            IndexSetKind::M3 { d2, d3 } => Rows::AtMost(m_lower(t, d3), t.powf(1.0 - d2) - 1.0),
            IndexSetKind::M4 { d3 } => Rows::Open(1.0 / t, 1.0 / t.powf(1.0 - d3)),
            IndexSetKind::ExampleN { d1, d2 } => {
                Rows::Open(t.powf(1.0 - d2) - 1.0, t.powf(1.0 - d1) - 1.0)
            }
            IndexSetKind::ExampleM { d1, d2 } => Rows::Open(t.powf(d1 - 1.0), t.powf(d2 - 1.0)),
            IndexSetKind::Mr { d3, c } => {
                let centre = t.powf(d3 - 1.0);
                let w = c * t.powf(-d3 / 2.0);
                Rows::Open(centre * (1.0 - w), centre * (1.0 + w))
            }
            IndexSetKind::GStrip => Rows::Strip,
        }
    }

    /// Inclusive `m2` range for row `m1`; empty when `lo > hi`.
    pub fn row(&self, m1: usize, boundary: Boundary) -> (usize, usize) {
        let n = self.n() as i64;
        let m = m1 as f64;
        let (lo, hi) = match self.rows() {
            Rows::Full => (1, n),
            Rows::Open(a, b) => (boundary.above(a * m), boundary.below(b * m)),
            Rows::AtLeast(a) => (boundary.at_least(a * m), n),
            Rows::AtMost(b, strict) => (1, boundary.at_most(b * m).min(boundary.below(strict * m))),
            Rows::Strip => return (self.n() + 1, self.n() + m1),
        };
        let lo = lo.max(1);
        let hi = hi.min(n);
        if lo > hi {
            (1, 0)
        } else {
            (lo as usize, hi as usize)
        }
    }

    /// Direct membership test from the defining inequality.
    pub fn contains(&self, m1: usize, m2: usize) -> bool {
        let n = self.n();
        if m1 == 0 || m1 > n || m2 == 0 {
            return false;
        }
        if let Rows::Strip = self.rows() {
            return m2 > n && m2 <= n + m1;
        }
        if m2 > n {
            return false;
        }
        let (a, b) = (m1 as f64, m2 as f64);
        match self.rows() {
            Rows::Full => true,
            Rows::Open(lo, hi) => b > lo * a && b < hi * a,
            Rows::AtLeast(lo) => b >= lo * a,
            Rows::AtMost(hi, strict) => b <= hi * a && b < strict * a,
            Rows::Strip => unreachable!(),
        }
    }

    pub fn cardinality(&self, boundary: Boundary) -> u64 {
        (1..=self.n())
            .map(|m1| {
                let (lo, hi) = self.row(m1, boundary);
                (hi + 1).saturating_sub(lo) as u64
            })
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weight {
    /// `m2^{-conj s} (m1+m2)^{-s}`.
    Sm,
    /// `m1^{-s} m2^{-conj s}`.
    Plain,
    /// `m1^{-s} m2^{-conj s} e^{-i (m2/m1) t}`.
    S4p,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseSumVariant {
    /// `sqrt(m2/m1) m2^{-conj s} (m1+m2)^{-s}` over the shifted index set.
    Shifted,
    /// `e^{i t m2/m1} / sqrt(m1 (m1+m2))`.
    RatioShifted,
    /// `e^{i t m2/m1} / sqrt(m1 m2)`.
    Ratio,
}

/// `k^{-s}` for `k = 0..=len` (entry 0 unused).
fn power_table(s: Complex64, len: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len + 1);
    out.push(Complex64::new(0.0, 0.0));
    for k in 1..=len {
        out.push(pow_neg(s, (k as f64).ln()));
    }
    out
}

fn sum_rows<F>(spec: &IndexSetSpec, opts: SumOptions, term: F) -> SumValue
where
    F: Fn(usize, usize) -> Complex64 + Sync,
{
    let n = spec.n();
    let acc = chunked_sum(n, ROW_CHUNK, opts.parallel, |i, acc| {
        let m1 = i + 1;
        let (lo, hi) = spec.row(m1, opts.boundary);
        for m2 in lo..=hi {
            acc.add(term(m1, m2));
        }
    });
    SumValue::from_acc(&acc)
}

/// Sum of `weight` over `spec` with exponent `s` (not tied to `spec.t`).
pub fn sum_over_s(spec: &IndexSetSpec, weight: Weight, s: Complex64, opts: SumOptions) -> SumValue {
    let n = spec.n();
    let pw = power_table(s, 2 * n + 1);
    let t = spec.t;
    match weight {
        Weight::Sm => sum_rows(spec, opts, |m1, m2| pw[m2].conj() * pw[m1 + m2]),
        Weight::Plain => sum_rows(spec, opts, |m1, m2| pw[m1] * pw[m2].conj()),
        Weight::S4p => sum_rows(spec, opts, |m1, m2| {
            pw[m1] * pw[m2].conj() * cis_product(-t, m2 as f64 / m1 as f64)
        }),
    }
}

pub fn sum_over(spec: &IndexSetSpec, weight: Weight, p: StripPoint) -> SumValue {
    sum_over_s(spec, weight, p.s(), SumOptions::default())
}

/// `sum_{m=1}^{n} m^{-s}`.
pub fn partial_zeta_sum(s: Complex64, n: usize) -> SumValue {
    let acc = chunked_sum(n, 1024, false, |i, acc| {
        acc.add(pow_neg(s, ((i + 1) as f64).ln()))
    });
    SumValue::from_acc(&acc)
}

/// `S_R = (sum m^{-s})(sum m^{-conj s})` over `m <= n`.
pub fn sum_sr_with(s: Complex64, n: usize) -> SumValue {
    let a = partial_zeta_sum(s, n);
    let b = partial_zeta_sum(s.conj(), n);
    SumValue {
        value: a.value * b.value,
        terms: (n * n) as u64,
        compensation: a.compensation * b.value.norm() + b.compensation * a.value.norm(),
    }
}

pub fn sum_sr(p: StripPoint) -> Result<SumValue> {
    if p.t() < 1.0 {
        return Err(Error::invalid(format!("t = {} must be >= 1", p.t())));
    }
    Ok(sum_sr_with(p.s(), p.floor_t()))
}

/// `g(u, v) = sum_{m=1}^{N} sum_{n=N+1}^{N+m} m^{-u} n^{-v}`.
pub fn g_sum(u: Complex64, v: Complex64, n: usize) -> SumValue {
    let pu = power_table(u, n);
    let pv = power_table(v, 2 * n);
    let acc = chunked_sum(n, ROW_CHUNK, true, |i, acc| {
        let m = i + 1;
        for &w in &pv[n + 1..=n + m] {
            acc.add(pu[m] * w);
        }
    });
    SumValue::from_acc(&acc)
}

/// `f(u, v) = sum_{m=1}^{N} sum_{n=1}^{N} m^{-u} (m+n)^{-v}`.
pub fn f_sum(u: Complex64, v: Complex64, n: usize) -> SumValue {
    let pu = power_table(u, n);
    let pv = power_table(v, 2 * n);
    let acc = chunked_sum(n, ROW_CHUNK, true, |i, acc| {
        let m = i + 1;
        for k in 1..=n {
            acc.add(pu[m] * pv[m + k]);
        }
    });
    SumValue::from_acc(&acc)
}

/// `g(conj s, s)` with `N = [t]`.
pub fn sum_g(p: StripPoint) -> Result<SumValue> {
    if p.t() < 1.0 {
        return Err(Error::invalid(format!("t = {} must be >= 1", p.t())));
    }
    Ok(g_sum(p.s().conj(), p.s(), p.floor_t()))
}

pub fn check_fg_identity(u: Complex64, v: Complex64, n: usize) -> Result<ResidualReport> {
    if n == 0 {
        return Err(Error::invalid("N must be at least 1"));
    }
    let diag = chunked_sum(n, 1024, false, |i, acc| {
        let l = ((i + 1) as f64).ln();
        acc.add(pow_neg(u + v, l));
    });
    let lhs = f_sum(u, v, n).value + f_sum(v, u, n).value + diag.value();
    let rhs = partial_zeta_sum(u, n).value * partial_zeta_sum(v, n).value
        + g_sum(u, v, n).value
        + g_sum(v, u, n).value;
    Ok(ResidualReport::new(lhs, rhs))
}

/// `2 Re(full-square S_M)` against `S_R - sum m^{-2 sigma} + 2 Re g`.
pub fn check_sr_sm_relation(p: StripPoint) -> Result<ResidualReport> {
    let spec = IndexSetSpec::new(IndexSetKind::FullSquare, p.t())?;
    let n = spec.n();
    let full = sum_over(&spec, Weight::Sm, p);
    let sr = sum_sr(p)?;
    let diag = partial_zeta_sum(Complex64::new(2.0 * p.sigma(), 0.0), n);
    let g = sum_g(p)?;
    let lhs = 2.0 * full.value.re;
    let rhs = sr.value.re - diag.value.re + 2.0 * g.value.re;
    Ok(ResidualReport::real(lhs, rhs))
}

/// Full-square `S_M` against `S_M + S_2 + S_3`.
pub fn check_partition(p: StripPoint, d2: f64, d3: f64) -> Result<ResidualReport> {
    let t = p.t();
    let full = IndexSetSpec::new(IndexSetKind::FullSquare, t)?;
    let parts = [
        IndexSetSpec::new(IndexSetKind::M { d2, d3 }, t)?,
        IndexSetSpec::new(IndexSetKind::M2 { d2 }, t)?,
        IndexSetSpec::new(IndexSetKind::M3 { d2, d3 }, t)?,
    ];
    let lhs = sum_over(&full, Weight::Sm, p).value;
    let rhs = parts.iter().map(|s| sum_over(s, Weight::Sm, p).value).sum();
    Ok(ResidualReport::new(lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverDefect {
    Uncovered { m1: usize, m2: usize },
    Overlap { m1: usize, m2: usize, count: u8 },
    OutsideSquare { m1: usize, m2: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub holds: bool,
    pub n: usize,
    pub part_sizes: [u64; 3],
    pub uncovered: u64,
    pub overlapping: u64,
    pub outside: u64,
    pub counterexample: Option<CoverDefect>,
}

fn tally(n: usize, parts: [Vec<(usize, usize)>; 3]) -> CoverReport {
    let mut hits = vec![0u8; n * n];
    let mut outside = 0;
    let mut first_outside = None;
    let part_sizes = [
        parts[0].len() as u64,
        parts[1].len() as u64,
        parts[2].len() as u64,
    ];
    for part in &parts {
        for &(m1, m2) in part {
            if m1 == 0 || m2 == 0 || m1 > n || m2 > n {
                outside += 1;
                first_outside.get_or_insert(CoverDefect::OutsideSquare { m1, m2 });
            } else {
                hits[(m1 - 1) * n + (m2 - 1)] += 1;
            }
        }
    }
    let (mut uncovered, mut overlapping) = (0, 0);
    let mut defect = first_outside;
    for (idx, &h) in hits.iter().enumerate() {
        let (m1, m2) = (idx / n + 1, idx % n + 1);
        if h == 0 {
            uncovered += 1;
            defect.get_or_insert(CoverDefect::Uncovered { m1, m2 });
        } else if h > 1 {
            overlapping += 1;
            defect.get_or_insert(CoverDefect::Overlap { m1, m2, count: h });
        }
    }
    CoverReport {
        holds: uncovered == 0 && overlapping == 0 && outside == 0,
        n,
        part_sizes,
        uncovered,
        overlapping,
        outside,
        counterexample: defect,
    }
}

/// Exhaustive check that `M`, `M2`, `M3` partition the square. `M` is
/// enumerated by its ratio predicate, `M2` and `M3` by their row ranges.
pub fn check_index_cover(t: f64, d2: f64, d3: f64) -> Result<CoverReport> {
    let m = IndexSetSpec::new(IndexSetKind::M { d2, d3 }, t)?;
    let m2 = IndexSetSpec::new(IndexSetKind::M2 { d2 }, t)?;
    let m3 = IndexSetSpec::new(IndexSetKind::M3 { d2, d3 }, t)?;
    let n = m.n();
    let square = || (1..=n).flat_map(move |a| (1..=n).map(move |b| (a, b)));
    let by_rows = |spec: &IndexSetSpec| -> Vec<(usize, usize)> {
        (1..=n)
            .flat_map(|a| {
                let (lo, hi) = spec.row(a, Boundary::Floor);
                (lo..=hi).map(move |b| (a, b))
            })
            .collect()
    };
    let parts = [
        square().filter(|&(a, b)| m.contains(a, b)).collect(),
        by_rows(&m2),
        by_rows(&m3),
    ];
    Ok(tally(n, parts))
}

/// The same check with the two outer sums bounded exactly as first stated in the
/// index decomposition. Kept as a diagnostic; it does not partition.
pub fn check_index_cover_literal(t: f64, d2: f64, d3: f64) -> Result<CoverReport> {
    let m = IndexSetSpec::new(IndexSetKind::M { d2, d3 }, t)?;
    let n = m.n() as i64;
    let fl = |x: f64| x.floor() as i64;
    let a3 = t.powf(1.0 - d3) - 1.0;
    let a2 = t.powf(1.0 - d2) - 1.0;
    let mut second = Vec::new();
    for m1 in 1..=fl(t / a3) - 1 {
        for m2 in fl(a3 * m1 as f64) + 1..=n {
            second.push((m1 as usize, m2 as usize));
        }
    }
    let mut third = Vec::new();
    for m1 in fl(t.powf(1.0 - d2))..=n {
        for m2 in 1..=fl(m1 as f64 / a2) - 1 {
            third.push((m1 as usize, m2 as usize));
        }
    }
    let nn = n as usize;
    let first = (1..=nn)
        .flat_map(|a| (1..=nn).map(move |b| (a, b)))
        .filter(|&(a, b)| m.contains(a, b))
        .collect();
    Ok(tally(nn, [first, second, third]))
}

/// `sum_{m=[t^{1-d2}]}^{[t]} sum_{n=m+1}^{[m(1+t^{d2-1})]} n^{-1/2-it} m^{-1/2+it}`.
pub fn sum_short_range(t: f64, d2: f64) -> Result<SumValue> {
    if !(t >= 4.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t = {t} must be finite and >= 4")));
    }
    check_delta("d2", d2)?;
    let n = t.floor() as usize;
    let start = (t.powf(1.0 - d2).floor() as usize).max(1);
    let step = t.powf(d2 - 1.0);
    let upper = |m: usize| ((m as f64 * (1.0 + step)).floor() as usize).max(m);
    let s = Complex64::new(0.5, t);
    let pw = power_table(s, upper(n));
    let acc = chunked_sum(n + 1 - start.min(n + 1), ROW_CHUNK, true, |i, acc| {
        let m = start + i;
        for k in m + 1..=upper(m) {
            acc.add(pw[k] * pw[m].conj());
        }
    });
    Ok(SumValue::from_acc(&acc))
}

/// Reference scale `t^{d2-1/2} ln t` for `sum_short_range`.
pub fn short_range_scale(t: f64, d2: f64) -> f64 {
    t.powf(d2 - 0.5) * t.ln()
}

/// The weighted sums of the generic stationary-phase examples, with
/// `s = 1/2 + i t`.
pub fn phase_example_sum(t: f64, d1: f64, d2: f64, variant: PhaseSumVariant) -> Result<SumValue> {
    if !(t >= 4.0 && t.is_finite()) {
        return Err(Error::invalid(format!("t = {t} must be finite and >= 4")));
    }
    let opts = SumOptions::default();
    let s = Complex64::new(0.5, t);
    match variant {
        PhaseSumVariant::Shifted => {
            let spec = IndexSetSpec::new(IndexSetKind::ExampleN { d1, d2 }, t)?;
            let pw = power_table(s, 2 * spec.n() + 1);
            Ok(sum_rows(&spec, opts, |m1, m2| {
                (m2 as f64 / m1 as f64).sqrt() * pw[m2].conj() * pw[m1 + m2]
            }))
        }
        PhaseSumVariant::RatioShifted => {
            let spec = IndexSetSpec::new(IndexSetKind::ExampleM { d1, d2 }, t)?;
            Ok(sum_rows(&spec, opts, |m1, m2| {
                cis_product(t, m2 as f64 / m1 as f64)
                    / ((m1 as f64).sqrt() * ((m1 + m2) as f64).sqrt())
            }))
        }
        PhaseSumVariant::Ratio => {
            let spec = IndexSetSpec::new(IndexSetKind::ExampleM { d1, d2 }, t)?;
            Ok(sum_rows(&spec, opts, |m1, m2| {
                cis_product(t, m2 as f64 / m1 as f64) / ((m1 * m2) as f64).sqrt()
            }))
        }
    }
}

/// The `Ratio` sum against the conjugate of the `Shifted` sum, which it approaches
/// under `m1 = n1 + n2`, `m2 = n1` when `t^{2 d2 - 1}` is small.
pub fn phase_example_change_of_variables(t: f64, d1: f64, d2: f64) -> Result<ResidualReport> {
    let ratio = phase_example_sum(t, d1, d2, PhaseSumVariant::Ratio)?;
    let shifted = phase_example_sum(t, d1, d2, PhaseSumVariant::Shifted)?;
    Ok(ResidualReport::new(ratio.value, shifted.value.conj()))
}

/// `2 Re(full-square S_M) - |sum m^{-s}|^2 + ln t` at `sigma = 1/2`; bounded in `t`.
pub fn log_defect(t: f64) -> Result<f64> {
    let p = StripPoint::new(0.5, t)?;
    let spec = IndexSetSpec::new(IndexSetKind::FullSquare, t)?;
    let full = sum_over(&spec, Weight::Sm, p);
    let a = partial_zeta_sum(p.s(), p.floor_t()).value;
    Ok(2.0 * full.value.re - a.norm_sqr() + t.ln())
}
