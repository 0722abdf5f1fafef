//! Compensated summation and a deterministic chunked parallel reduction.

use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: &Neumaier) {
        self.add(other.sum);
        self.add(other.comp);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    pub fn compensation(&self) -> f64 {
        self.comp
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NeumaierComplex {
    re: Neumaier,
    im: Neumaier,
    terms: u64,
}

impl NeumaierComplex {
    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.terms += 1;
    }

    pub fn merge(&mut self, other: &NeumaierComplex) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
        self.terms += other.terms;
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn compensation(&self) -> f64 {
        Complex64::new(self.re.compensation(), self.im.compensation()).norm()
    }

    pub fn terms(&self) -> u64 {
        self.terms
    }
}

fn pairwise_merge(mut parts: Vec<NeumaierComplex>) -> NeumaierComplex {
    if parts.is_empty() {
        return NeumaierComplex::default();
    }
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        for pair in parts.chunks(2) {
            let mut a = pair[0];
            if let Some(b) = pair.get(1) {
                a.merge(b);
            }
            next.push(a);
        }
        parts = next;
    }
    parts[0]
}

/// Sums `body(i, acc)` over `i in 0..n`. Items are grouped into fixed chunks
/// of `chunk` consecutive indices; each chunk is summed sequentially and the
/// chunk totals are merged pairwise in index order. The result therefore
/// does not depend on `parallel` or on the number of worker threads.
pub fn chunked_sum<F>(n: usize, chunk: usize, parallel: bool, body: F) -> NeumaierComplex
where
    F: Fn(usize, &mut NeumaierComplex) + Sync,
{
    let chunk = chunk.max(1);
    let n_chunks = n.div_ceil(chunk);
    let run = |c: usize| {
        let mut acc = NeumaierComplex::default();
        for i in c * chunk..((c + 1) * chunk).min(n) {
            body(i, &mut acc);
        }
        acc
    };
    let parts: Vec<NeumaierComplex> = if parallel {
        (0..n_chunks).into_par_iter().map(run).collect()
    } else {
        (0..n_chunks).map(run).collect()
    };
    pairwise_merge(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn neumaier_recovers_cancelled_terms() {
        let mut acc = Neumaier::default();
        for x in [1.0, 1e100, 1.0, -1e100] {
            acc.add(x);
        }
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn chunked_sum_counts_terms() {
        let s = chunked_sum(1000, 64, true, |i, acc| {
            acc.add(Complex64::new(i as f64, 1.0))
        });
        assert_eq!(s.terms(), 1000);
        assert_eq!(s.value(), Complex64::new(499500.0, 1000.0));
    }

    proptest! {
        #[test]
        fn parallel_is_bit_identical(n in 0usize..5000, chunk in 1usize..300, seed in 0u64..1000) {
            let f = |i: usize, acc: &mut NeumaierComplex| {
                let x = ((i as u64 * 2654435761 + seed) % 1000003) as f64;
                acc.add(Complex64::new(1.0 / (x + 1.0), (x * 0.37).sin()));
            };
            let a = chunked_sum(n, chunk, true, f);
            let b = chunked_sum(n, chunk, false, f);
            prop_assert_eq!(a.value().re.to_bits(), b.value().re.to_bits());
            prop_assert_eq!(a.value().im.to_bits(), b.value().im.to_bits());
        }
    }
}
