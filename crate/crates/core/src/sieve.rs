//! Segmented, odd-only, bit-packed sieve of Eratosthenes over arbitrary `u64`
//! ranges, plus exact prime counting.
//!
//! A segment of `segment_len` entries covers `2 * segment_len` consecutive
//! integers; entry `j` stands for the odd number `first_odd + 2j`. The prime 2
//! is emitted separately whenever it falls inside the segment.
//!
//! Sieving primes (odd primes up to √hi) are computed once per request and
//! shared read-only between workers. Segments are sieved independently and
//! always handed to consumers in ordinal order, so results never depend on the
//! thread count.

use rayon::prelude::*;
use thiserror::Error;

use crate::primality;

/// Default number of odd entries per segment (128 KiB of bits).
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("range [{lo}, {hi}) needs {needed} segment entries but the budget is {budget} and auto-splitting is disabled")]
    RangeTooLarge {
        lo: u64,
        hi: u64,
        needed: u64,
        budget: usize,
    },
    #[error("segment length must be at least 64 entries, got {0}")]
    SegmentTooShort(usize),
    #[error("thread count must be at least 1")]
    NoThreads,
}

/// One window `[lo, hi)` of a segmented scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub lo: u64,
    pub hi: u64,
    pub index: usize,
}

impl Segment {
    fn first_odd(&self) -> u64 {
        self.lo | 1
    }

    /// Number of odd integers in `[lo, hi)`.
    fn odd_count(&self) -> usize {
        let first = self.first_odd() as u128;
        let hi = self.hi as u128;
        if first >= hi {
            0
        } else {
            (hi - first).div_ceil(2) as usize
        }
    }
}

/// A segment after sieving: bit `j` of `composite` is set when
/// `first_odd + 2j` is not prime.
#[derive(Debug, Clone)]
pub struct SievedSegment {
    pub segment: Segment,
    composite: Vec<u64>,
    entries: usize,
}

impl SievedSegment {
    /// Primes of the segment in ascending order.
    pub fn primes(&self) -> SegmentPrimes<'_> {
        SegmentPrimes {
            seg: self,
            emit_two: self.segment.lo <= 2 && 2 < self.segment.hi,
            word: 0,
            bits: self.live_word(0),
        }
    }

    pub fn count(&self) -> u64 {
        let two = (self.segment.lo <= 2 && 2 < self.segment.hi) as u64;
        let odd: u64 = (0..self.composite.len())
            .map(|w| self.live_word(w).count_ones() as u64)
            .sum();
        two + odd
    }

    fn live_word(&self, w: usize) -> u64 {
        if w >= self.composite.len() {
            return 0;
        }
        let mut live = !self.composite[w];
        let tail = self.entries - w * 64;
        if tail < 64 {
            live &= (1u64 << tail) - 1;
        }
        live
    }
}

pub struct SegmentPrimes<'a> {
    seg: &'a SievedSegment,
    emit_two: bool,
    word: usize,
    bits: u64,
}

impl Iterator for SegmentPrimes<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.emit_two {
            self.emit_two = false;
            return Some(2);
        }
        while self.bits == 0 {
            self.word += 1;
            if self.word >= self.seg.composite.len() {
                return None;
            }
            self.bits = self.seg.live_word(self.word);
        }
        let j = self.word * 64 + self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(self.seg.segment.first_odd() + 2 * j as u64)
    }
}

/// Integer square root, floor.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while (r as u128) * (r as u128) > n as u128 {
        r -= 1;
    }
    while ((r + 1) as u128) * ((r + 1) as u128) <= n as u128 {
        r += 1;
    }
    r
}

/// Odd primes `p <= limit`, ascending. Used as sieving primes.
fn odd_primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    // Small enough for a plain odd-only sieve when √limit fits in a few words;
    // otherwise recurse through the segmented path.
    if limit <= 1 << 22 {
        let n = ((limit - 1) / 2) as usize; // entries for 3, 5, ..., up to limit
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for j in 1..=n {
            if composite[j] {
                continue;
            }
            let p = 2 * j + 1;
            out.push(p as u64);
            let mut k = (p * p - 1) / 2;
            while k <= n {
                composite[k] = true;
                k += p;
            }
        }
        return out;
    }
    let base = odd_primes_up_to(isqrt(limit));
    let hi = limit + 1;
    let mut out = Vec::new();
    let span = 2 * DEFAULT_SEGMENT_LEN as u64;
    let mut lo = 3;
    let mut index = 0;
    while lo < hi {
        let seg = Segment {
            lo,
            hi: hi.min(lo.saturating_add(span)),
            index,
        };
        out.extend(sieve_segment(seg, &base).primes());
        lo = seg.hi;
        index += 1;
    }
    out
}

/// Marks odd composites of `seg` using the odd sieving primes in `base`.
fn sieve_segment(seg: Segment, base: &[u64]) -> SievedSegment {
    let entries = seg.odd_count();
    let mut composite = vec![0u64; entries.div_ceil(64)];
    let first = seg.first_odd();
    if first == 1 && entries > 0 {
        composite[0] |= 1;
    }
    let hi = seg.hi as u128;
    for &p in base {
        let p128 = p as u128;
        let sq = p128 * p128;
        if sq >= hi {
            break;
        }
        let mut start = (first as u128).div_ceil(p128) * p128;
        if start % 2 == 0 {
            start += p128;
        }
        if start < sq {
            start = sq;
        }
        if start >= hi {
            continue;
        }
        let mut j = ((start - first as u128) / 2) as usize;
        let step = p as usize;
        while j < entries {
            composite[j >> 6] |= 1 << (j & 63);
            j += step;
        }
    }
    SievedSegment {
        segment: seg,
        composite,
        entries,
    }
}

/// Configurable prime generator. Cheap to clone; holds no state between calls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeEngine {
    segment_len: usize,
    threads: usize,
    auto_split: bool,
}

impl Default for PrimeEngine {
    fn default() -> Self {
        Self {
            segment_len: DEFAULT_SEGMENT_LEN,
            threads: 1,
            auto_split: true,
        }
    }
}

impl PrimeEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_segment_len(mut self, segment_len: usize) -> Result<Self, EngineError> {
        if segment_len < 64 {
            return Err(EngineError::SegmentTooShort(segment_len));
        }
        self.segment_len = segment_len;
        Ok(self)
    }

    pub fn with_threads(mut self, threads: usize) -> Result<Self, EngineError> {
        if threads == 0 {
            return Err(EngineError::NoThreads);
        }
        self.threads = threads;
        Ok(self)
    }

    /// When disabled, a request spanning more than one segment is an error
    /// instead of being split.
    pub fn with_auto_split(mut self, auto_split: bool) -> Self {
        self.auto_split = auto_split;
        self
    }

    pub fn segment_len(&self) -> usize {
        self.segment_len
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    /// The windows tiling `[lo, hi)`, in ordinal order.
    pub fn segments(&self, lo: u64, hi: u64) -> impl Iterator<Item = Segment> {
        let span = 2 * self.segment_len as u64;
        let mut next_lo = lo;
        let mut index = 0;
        std::iter::from_fn(move || {
            if next_lo >= hi {
                return None;
            }
            let seg = Segment {
                lo: next_lo,
                hi: hi.min(next_lo.saturating_add(span)),
                index,
            };
            next_lo = seg.hi;
            index += 1;
            Some(seg)
        })
    }

    fn check_budget(&self, lo: u64, hi: u64) -> Result<(), EngineError> {
        if self.auto_split || lo >= hi {
            return Ok(());
        }
        let needed = (hi - lo).div_ceil(2);
        if needed > self.segment_len as u64 {
            return Err(EngineError::RangeTooLarge {
                lo,
                hi,
                needed,
                budget: self.segment_len,
            });
        }
        Ok(())
    }

    /// Narrow windows high up are cheaper to test number by number than to
    /// sieve, since sieving needs every prime up to √hi.
    fn prefers_direct_testing(lo: u64, hi: u64) -> bool {
        let width = hi - lo;
        width.saturating_mul(64) < isqrt(hi - 1)
    }

    /// Sieves `[lo, hi)` and feeds every segment to `visit` in ordinal order.
    pub fn for_each_segment<F>(&self, lo: u64, hi: u64, mut visit: F) -> Result<(), EngineError>
    where
        F: FnMut(&SievedSegment),
    {
        self.check_budget(lo, hi)?;
        if lo >= hi {
            return Ok(());
        }
        let base = odd_primes_up_to(isqrt(hi - 1));
        let segments: Vec<Segment> = self.segments(lo, hi).collect();
        if self.threads == 1 || segments.len() == 1 {
            for seg in segments {
                visit(&sieve_segment(seg, &base));
            }
            return Ok(());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .expect("failed to start sieve worker pool");
        let batch = self.threads * 2;
        for chunk in segments.chunks(batch) {
            let sieved: Vec<SievedSegment> =
                pool.install(|| chunk.par_iter().map(|&s| sieve_segment(s, &base)).collect());
            for s in &sieved {
                visit(s);
            }
        }
        Ok(())
    }

    /// Calls `f` for each prime in `[lo, hi)`, ascending.
    pub fn for_each_prime<F>(&self, lo: u64, hi: u64, mut f: F) -> Result<(), EngineError>
    where
        F: FnMut(u64),
    {
        self.check_budget(lo, hi)?;
        if lo >= hi {
            return Ok(());
        }
        if Self::prefers_direct_testing(lo, hi) {
            (lo..hi).filter(|&n| primality::is_prime(n)).for_each(f);
            return Ok(());
        }
        self.for_each_segment(lo, hi, |seg| seg.primes().for_each(&mut f))
    }

    /// Exactly the primes `p` with `lo <= p < hi`, ascending.
    pub fn primes_in_range(&self, lo: u64, hi: u64) -> Result<Vec<u64>, EngineError> {
        let mut out = Vec::new();
        self.for_each_prime(lo, hi, |p| out.push(p))?;
        Ok(out)
    }

    /// π(x): the number of primes strictly below `x`.
    pub fn prime_count(&self, x: u64) -> u64 {
        let mut total = 0;
        // Always splits, so the budget check cannot fire.
        let engine = self.clone().with_auto_split(true);
        engine
            .for_each_segment(0, x, |seg| total += seg.count())
            .expect("auto-split sieve cannot fail");
        total
    }
}

/// Primes in `[lo, hi)` with the default engine.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    PrimeEngine::default()
        .primes_in_range(lo, hi)
        .expect("default engine auto-splits")
}

/// π(x) = #{p prime : p < x}. Note the strict inequality.
pub fn prime_count(x: u64) -> u64 {
    PrimeEngine::default().prime_count(x)
}
