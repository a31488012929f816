//! Consecutive-prime gaps and everything derived from them: Andrica
//! differences, maximal-gap records, first occurrences of each gap, the
//! largest Andrica differences and their running maximum.
//!
//! Boundary convention: a pair `(p, q)` belongs to a scan with bound `limit`
//! iff `q < limit`, the same strictness as [`prime_count`](crate::prime_count).
//!
//! The record-based R(x) and the running maximum of A_n are kept as separate
//! quantities. Taking R at the record pair whose primes both lie below x, the
//! bound A_n <= R(p_n) fails for small n (A_4 = 0.6709 at (7, 11) exceeds
//! every record difference below 7), so only the envelope is guaranteed to
//! dominate.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use crate::real::Real;
use crate::sieve::PrimeEngine;

/// A pair of consecutive primes and the gap between them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeGap {
    pub p: u64,
    pub q: u64,
    pub d: u64,
}

impl PrimeGap {
    /// Panics if `q <= p`.
    pub fn new(p: u64, q: u64) -> Self {
        assert!(q > p, "gap endpoints out of order: ({p}, {q})");
        Self { p, q, d: q - p }
    }

    pub fn andrica<T: Real>(&self) -> T {
        andrica_diff(self)
    }
}

/// √q − √p evaluated as d / (√q + √p).
///
/// The subtraction form cancels catastrophically for large p: near 10¹⁸ both
/// roots are about 1.19·10⁹ and differ in the seventh decimal place. The
/// quotient form has no cancellation; only the two integer-to-float roundings
/// and a handful of correctly rounded operations contribute error.
pub fn andrica_diff<T: Real>(gap: &PrimeGap) -> T {
    sqrt_difference(gap.p, gap.d)
}

/// √(p + d) − √p for any `p` and `d > 0`, in quotient form.
pub fn sqrt_difference<T: Real>(p: u64, d: u64) -> T {
    let q = p as u128 + d as u128;
    let q = T::from_u128(q).expect("u128 converts to a float type");
    T::from_int(d) / (q.sqrt() + T::from_int(p).sqrt())
}

/// A pair with its Andrica difference; `n` is the index of `p` among the
/// primes (2 is the first) when the producer knows it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndricaPoint<T> {
    pub n: Option<u64>,
    pub gap: PrimeGap,
    pub a: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSource {
    Computed,
    Reference,
    Merged,
}

/// A maximal-gap record: the pair `(p, q)` opens a gap strictly larger than
/// every gap before it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRecord<T> {
    pub p: u64,
    pub q: u64,
    pub gap: u64,
    /// √q − √p.
    pub r: T,
    /// Index of `p` among the primes, known for computed records.
    pub n: Option<u64>,
}

impl<T: Real> GapRecord<T> {
    pub fn from_pair(p: u64, gap: u64, n: Option<u64>) -> Self {
        Self {
            p,
            q: p + gap,
            gap,
            r: sqrt_difference(p, gap),
            n,
        }
    }
}

/// The step function G(x) as a list of records.
#[derive(Debug, Clone, PartialEq)]
pub struct GapRecordTable<T> {
    pub records: Vec<GapRecord<T>>,
    pub source: TableSource,
    /// Records are exhaustive for pairs with `q < limit`.
    pub limit: u64,
}

impl<T: Real> GapRecordTable<T> {
    /// The largest gap among pairs with both primes below `x`, with its pair.
    pub fn g_at(&self, x: u64) -> Option<&GapRecord<T>> {
        self.records.iter().take_while(|r| r.q < x).last()
    }

    /// True when gaps and opening primes are both strictly increasing.
    pub fn is_monotone(&self) -> bool {
        self.records
            .windows(2)
            .all(|w| w[0].gap < w[1].gap && w[0].p < w[1].p)
    }
}

/// The smallest prime followed by a gap of exactly `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FirstOccurrence {
    pub d: u64,
    pub p: u64,
}

impl FirstOccurrence {
    pub fn gap(&self) -> PrimeGap {
        PrimeGap::new(self.p, self.p + self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AndricaReport<T> {
    pub all_below_one: bool,
    pub max_a: T,
    pub argmax: Option<PrimeGap>,
    /// Number of pairs examined.
    pub count: u64,
}

/// Running maximum of A_n as a step function; one step per new maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct AndricaEnvelope<T> {
    pub steps: Vec<(u64, T)>,
}

impl<T: Real> AndricaEnvelope<T> {
    /// max{A_n : p_n <= x}, or `None` before the first pair.
    pub fn value_at(&self, x: u64) -> Option<T> {
        self.steps.iter().take_while(|(p, _)| *p <= x).last().map(|s| s.1)
    }

    pub fn last(&self) -> Option<T> {
        self.steps.last().map(|s| s.1)
    }
}

/// Ordering used for ranking Andrica points: larger `a` first, then smaller `p`.
#[derive(Debug, Clone, Copy)]
struct Ranked<T>(AndricaPoint<T>);

impl<T: Real> PartialEq for Ranked<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Ranked<T> {}
impl<T: Real> PartialOrd for Ranked<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Ranked<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .a
            .partial_cmp(&other.0.a)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.0.gap.p.cmp(&self.0.gap.p))
    }
}

/// Sequential fold over the gaps of an ordered prime stream.
#[derive(Debug, Clone, Default)]
pub struct GapScanner {
    engine: PrimeEngine,
}

impl GapScanner {
    pub fn new(engine: PrimeEngine) -> Self {
        Self { engine }
    }

    pub fn engine(&self) -> &PrimeEngine {
        &self.engine
    }

    /// Calls `f(n, gap)` for every consecutive pair with `q < limit`, where
    /// `gap.p` is the n-th prime. The previous prime is carried across segment
    /// boundaries.
    pub fn for_each_gap<F>(&self, limit: u64, mut f: F)
    where
        F: FnMut(u64, PrimeGap),
    {
        let mut prev: Option<u64> = None;
        let mut n = 0u64;
        self.engine
            .for_each_prime(0, limit, |q| {
                if let Some(p) = prev {
                    f(n, PrimeGap::new(p, q));
                }
                n += 1;
                prev = Some(q);
            })
            .expect("scanner engine always auto-splits");
    }

    pub fn gap_stream(&self, limit: u64) -> Vec<PrimeGap> {
        let mut out = Vec::new();
        self.for_each_gap(limit, |_, g| out.push(g));
        out
    }

    pub fn max_gap_records<T: Real>(&self, limit: u64) -> GapRecordTable<T> {
        let mut records = Vec::new();
        let mut best = 0;
        self.for_each_gap(limit, |n, g| {
            if g.d > best {
                best = g.d;
                records.push(GapRecord::from_pair(g.p, g.d, Some(n)));
            }
        });
        GapRecordTable {
            records,
            source: TableSource::Computed,
            limit,
        }
    }

    pub fn first_occurrences(&self, limit: u64) -> BTreeMap<u64, FirstOccurrence> {
        let mut firsts = BTreeMap::new();
        self.for_each_gap(limit, |_, g| {
            firsts
                .entry(g.d)
                .or_insert(FirstOccurrence { d: g.d, p: g.p });
        });
        firsts
    }

    /// The `k` largest Andrica differences, descending; equal values order by
    /// smaller `p` first.
    pub fn top_andrica<T: Real>(&self, limit: u64, k: usize) -> Vec<AndricaPoint<T>> {
        if k == 0 {
            return Vec::new();
        }
        let mut heap: BinaryHeap<Reverse<Ranked<T>>> = BinaryHeap::with_capacity(k + 1);
        self.for_each_gap(limit, |n, g| {
            let point = Ranked(AndricaPoint {
                n: Some(n),
                gap: g,
                a: andrica_diff(&g),
            });
            if heap.len() < k {
                heap.push(Reverse(point));
            } else if let Some(Reverse(worst)) = heap.peek() {
                if point > *worst {
                    heap.pop();
                    heap.push(Reverse(point));
                }
            }
        });
        let mut out: Vec<Ranked<T>> = heap.into_iter().map(|r| r.0).collect();
        out.sort_by(|a, b| b.cmp(a));
        out.into_iter().map(|r| r.0).collect()
    }

    pub fn andrica_envelope<T: Real>(&self, limit: u64) -> AndricaEnvelope<T> {
        let mut steps: Vec<(u64, T)> = Vec::new();
        self.for_each_gap(limit, |_, g| {
            let a: T = andrica_diff(&g);
            if steps.last().is_none_or(|&(_, m)| a > m) {
                steps.push((g.p, a));
            }
        });
        AndricaEnvelope { steps }
    }

    pub fn verify_andrica<T: Real>(&self, limit: u64) -> AndricaReport<T> {
        let mut report = AndricaReport {
            all_below_one: true,
            max_a: T::zero(),
            argmax: None,
            count: 0,
        };
        self.for_each_gap(limit, |_, g| {
            let a: T = andrica_diff(&g);
            report.count += 1;
            if a >= T::one() {
                report.all_below_one = false;
            }
            if report.argmax.is_none() || a > report.max_a {
                report.max_a = a;
                report.argmax = Some(g);
            }
        });
        report
    }
}

/// One `(p_L, R)` point per record.
pub fn empirical_r<T: Real>(table: &GapRecordTable<T>) -> Vec<(u64, T)> {
    table.records.iter().map(|r| (r.p, r.r)).collect()
}

pub fn gap_stream(limit: u64) -> Vec<PrimeGap> {
    GapScanner::default().gap_stream(limit)
}

pub fn max_gap_records<T: Real>(limit: u64) -> GapRecordTable<T> {
    GapScanner::default().max_gap_records(limit)
}

pub fn first_occurrences(limit: u64) -> BTreeMap<u64, FirstOccurrence> {
    GapScanner::default().first_occurrences(limit)
}

pub fn top_andrica<T: Real>(limit: u64, k: usize) -> Vec<AndricaPoint<T>> {
    GapScanner::default().top_andrica(limit, k)
}

pub fn andrica_envelope<T: Real>(limit: u64) -> AndricaEnvelope<T> {
    GapScanner::default().andrica_envelope(limit)
}

pub fn verify_andrica<T: Real>(limit: u64) -> AndricaReport<T> {
    GapScanner::default().verify_andrica(limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn stream_starts_with_the_odd_gap() {
        assert_eq!(gap_stream(6), vec![PrimeGap::new(2, 3), PrimeGap::new(3, 5)]);
        assert!(gap_stream(3).is_empty());
        let s = gap_stream(1000);
        assert_eq!(s[3], PrimeGap { p: 7, q: 11, d: 4 });
        assert_eq!(s.iter().find(|g| g.p == 113).unwrap().d, 14);
        assert!(s.iter().skip(1).all(|g| g.d % 2 == 0));
    }

    #[test]
    fn andrica_table_values() {
        let cases = [
            (2, 3, 0.317837245),
            (7, 11, 0.670873479),
            (107, 109, 0.096226076),
        ];
        for (p, q, want) in cases {
            let a: f64 = andrica_diff(&PrimeGap::new(p, q));
            assert_abs_diff_eq!(a, want, epsilon = 5e-10);
        }
    }

    #[test]
    fn records_below_12_and_130() {
        let t: GapRecordTable<f64> = max_gap_records(12);
        let pairs: Vec<_> = t.records.iter().map(|r| (r.p, r.q, r.gap)).collect();
        assert_eq!(pairs, vec![(2, 3, 1), (3, 5, 2), (7, 11, 4)]);

        let t: GapRecordTable<f64> = max_gap_records(130);
        let pairs: Vec<_> = t.records.iter().map(|r| (r.p, r.q, r.gap)).collect();
        assert_eq!(
            pairs,
            vec![(2, 3, 1), (3, 5, 2), (7, 11, 4), (23, 29, 6), (89, 97, 8), (113, 127, 14)]
        );
        assert_eq!(t.records[5].n, Some(30));
        assert!(t.is_monotone());
        assert_eq!(t.g_at(127).unwrap().gap, 8);
        assert_eq!(t.g_at(128).unwrap().gap, 14);
    }

    #[test]
    fn first_occurrence_values() {
        let f = first_occurrences(1000);
        assert_eq!(f[&1].p, 2);
        assert_eq!(f[&4].p, 7);
        assert_eq!(f[&6].p, 23);
        assert_eq!(f[&14].p, 113);
        assert!(f.keys().zip(f.keys().skip(1)).all(|(a, b)| a < b));
    }

    #[test]
    fn top_andrica_small_limits() {
        let top: Vec<AndricaPoint<f64>> = top_andrica(6, 1);
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].gap, PrimeGap::new(3, 5));
        assert_abs_diff_eq!(top[0].a, 0.504017170, epsilon = 5e-10);

        let top: Vec<AndricaPoint<f64>> = top_andrica(250, 3);
        let got: Vec<_> = top.iter().map(|p| (p.gap.p, p.gap.q)).collect();
        assert_eq!(got, vec![(7, 11), (113, 127), (23, 29)]);
        assert_abs_diff_eq!(top[1].a, 0.6392819, epsilon = 5e-8);
        assert_eq!(top[1].n, Some(30));
    }

    #[test]
    fn ranking_breaks_ties_by_smaller_p() {
        let a = Ranked(AndricaPoint { n: None, gap: PrimeGap::new(3, 5), a: 0.5f64 });
        let b = Ranked(AndricaPoint { n: None, gap: PrimeGap::new(5, 7), a: 0.5f64 });
        assert!(a > b);
    }

    #[test]
    fn envelope_steps() {
        let e: AndricaEnvelope<f64> = andrica_envelope(10);
        assert_abs_diff_eq!(e.last().unwrap(), 0.504017170, epsilon = 5e-10);
        let e: AndricaEnvelope<f64> = andrica_envelope(12);
        assert_abs_diff_eq!(e.last().unwrap(), 0.670873479, epsilon = 5e-10);
        assert_eq!(e.value_at(1), None);
        assert_abs_diff_eq!(e.value_at(6).unwrap(), 0.504017170, epsilon = 5e-10);
    }

    #[test]
    fn verify_boundaries() {
        let r: AndricaReport<f64> = verify_andrica(3);
        assert!(r.all_below_one);
        assert_eq!(r.count, 0);
        assert_eq!(r.argmax, None);

        let r: AndricaReport<f64> = verify_andrica(1000);
        assert!(r.all_below_one);
        assert_eq!(r.argmax, Some(PrimeGap::new(7, 11)));
        assert_eq!(r.count, 167); // π(1000) − 1
    }

    #[test]
    fn empirical_r_points() {
        let t: GapRecordTable<f64> = max_gap_records(130);
        let pts = empirical_r(&t);
        assert_eq!(pts[0].0, 2);
        assert_abs_diff_eq!(pts[0].1, 0.317837245, epsilon = 5e-10);
        assert_eq!(pts[5].0, 113);
        assert_abs_diff_eq!(pts[5].1, 0.6392819, epsilon = 5e-8);
        let r: f64 = sqrt_difference(199, 12);
        assert_abs_diff_eq!(r, 0.4191031, epsilon = 5e-8);
    }

    #[test]
    fn f32_instantiation() {
        let a: f32 = andrica_diff(&PrimeGap::new(7, 11));
        assert!((a - 0.670_873_5).abs() < 1e-6);
    }
}
