//! Segmented, bit-packed sieve of Eratosthenes over odd integers, producing
//! prime counts, twin-prime counts and interval enclosures of the partial
//! Brun sum `B(x)`.
//!
//! Work is split into fixed *chunks* of [`CHUNK_SPAN`] integers aligned to
//! multiples of the span. A chunk is the unit of parallelism and of
//! accumulation: its reciprocal sum starts from zero and adds pairs in
//! ascending order, and chunk sums are merged in ascending order. Inside a
//! chunk the bitmap is processed in segments of a configurable size, which
//! therefore never changes any result bit.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Integers per accumulation chunk.
pub const CHUNK_SPAN: u64 = 1 << 24;

/// Largest supported sieve bound.
pub const MAX_LIMIT: u64 = 1 << 62;

#[derive(Clone, Debug)]
pub struct SieveConfig {
    /// Odd integers per segment bitmap (one bit each).
    pub segment_slots: usize,
    /// Worker threads; results do not depend on it.
    pub threads: usize,
    /// Largest span `sieve_range` will materialize as a list.
    pub list_budget: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            // 256 KiB bitmap
            segment_slots: 1 << 21,
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            list_budget: 1 << 32,
        }
    }
}

impl SieveConfig {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_segment_bytes(mut self, bytes: usize) -> Self {
        self.segment_slots = (bytes.max(8) * 8).next_multiple_of(64);
        self
    }
}

/// Twin-prime census at a threshold: `pi2` pairs `(p, p + 2)` with `p <= x`
/// and an enclosure of their reciprocal sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwinCensus {
    pub x: u64,
    pub pi2: u64,
    pub brun_partial: Interval,
}

/// Odd primes up to `limit` by a plain sieve.
pub fn small_odd_primes(limit: u64) -> Vec<u32> {
    let limit = limit as usize;
    if limit < 3 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    let mut n = 3;
    while n <= limit {
        if !composite[n] {
            out.push(n as u32);
            let mut m = n * n;
            while m <= limit {
                composite[m] = true;
                m += 2 * n;
            }
        }
        n += 2;
    }
    out
}

/// Bitmap of odd integers `first, first + 2, ...`; a set bit marks a prime.
/// One slot past `slots` is sieved too so that a pair whose upper member lies
/// just outside the segment is still recognised.
pub struct Segment {
    first: u64,
    slots: usize,
    words: Vec<u64>,
}

impl Segment {
    fn empty() -> Self {
        Segment { first: 1, slots: 0, words: Vec::new() }
    }

    fn sieve(&mut self, first: u64, slots: usize, base: &[u32]) {
        debug_assert!(first % 2 == 1);
        self.first = first;
        self.slots = slots;
        let nbits = slots + 1;
        let nwords = nbits.div_ceil(64);
        self.words.clear();
        self.words.resize(nwords, u64::MAX);
        let spare = nwords * 64 - nbits;
        if spare > 0 {
            self.words[nwords - 1] >>= spare;
        }
        if first == 1 {
            self.words[0] &= !1;
        }
        let last = first + 2 * slots as u64;
        for &q in base {
            let q = q as u64;
            let sq = q * q;
            if sq > last {
                break;
            }
            let start = if sq >= first {
                sq
            } else {
                let r = first % q;
                let m = if r == 0 { first } else { first + (q - r) };
                if m % 2 == 0 {
                    m + q
                } else {
                    m
                }
            };
            let mut idx = ((start - first) / 2) as usize;
            let step = q as usize;
            let words = &mut self.words;
            while idx < nbits {
                words[idx >> 6] &= !(1u64 << (idx & 63));
                idx += step;
            }
        }
    }

    #[inline]
    fn valid_mask(&self, i: usize) -> u64 {
        let lo = i * 64;
        if lo + 64 <= self.slots {
            u64::MAX
        } else if lo >= self.slots {
            0
        } else {
            (1u64 << (self.slots - lo)) - 1
        }
    }

    #[inline]
    fn prime_word(&self, i: usize) -> u64 {
        self.words[i] & self.valid_mask(i)
    }

    #[inline]
    fn twin_word(&self, i: usize) -> u64 {
        let w = self.words[i];
        let next = self.words.get(i + 1).copied().unwrap_or(0);
        w & ((w >> 1) | (next << 63)) & self.valid_mask(i)
    }

    pub fn first(&self) -> u64 {
        self.first
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn prime_count(&self) -> u64 {
        (0..self.words.len()).map(|i| self.prime_word(i).count_ones() as u64).sum()
    }

    pub fn twin_count(&self) -> u64 {
        (0..self.words.len()).map(|i| self.twin_word(i).count_ones() as u64).sum()
    }

    /// Primes in the segment, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.words.len()).flat_map(move |i| BitIter {
            word: self.prime_word(i),
            base: self.first + 128 * i as u64,
        })
    }

    /// Lower members `p` of twin pairs in the segment, ascending.
    pub fn twins(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.words.len()).flat_map(move |i| BitIter {
            word: self.twin_word(i),
            base: self.first + 128 * i as u64,
        })
    }
}

struct BitIter {
    word: u64,
    base: u64,
}

impl Iterator for BitIter {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        if self.word == 0 {
            return None;
        }
        let tz = self.word.trailing_zeros() as u64;
        self.word &= self.word - 1;
        Some(self.base + 2 * tz)
    }
}

/// Receives the segments of one chunk in ascending order.
pub trait SegmentSink {
    fn visit(&mut self, segment: &Segment);
}

/// Half-open integer range `[lo, hi)` covered by one chunk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkBounds {
    pub lo: u64,
    pub hi: u64,
}

/// Sieve the odd integers of `[a, b)` chunk by chunk, handing each chunk's
/// segments to a fresh sink. Sinks come back in ascending chunk order
/// regardless of the thread count.
pub fn scan_chunks<S, F>(a: u64, b: u64, cfg: &SieveConfig, make_sink: F) -> Result<Vec<(ChunkBounds, S)>>
where
    S: SegmentSink + Send,
    F: Fn(ChunkBounds) -> S + Sync,
{
    if b > MAX_LIMIT {
        return Err(Error::InvalidRange { a, b });
    }
    if a >= b {
        return Ok(Vec::new());
    }
    let base = small_odd_primes((b + 2).isqrt() + 1);
    let first_chunk = a / CHUNK_SPAN;
    let last_chunk = (b - 1) / CHUNK_SPAN;
    let chunks: Vec<ChunkBounds> = (first_chunk..=last_chunk)
        .map(|k| ChunkBounds {
            lo: (k * CHUNK_SPAN).max(a),
            hi: ((k + 1) * CHUNK_SPAN).min(b),
        })
        .collect();
    let seg_slots = cfg.segment_slots.max(64);
    let run = |bounds: ChunkBounds| -> (ChunkBounds, S) {
        let mut sink = make_sink(bounds);
        let mut seg = Segment::empty();
        let first = bounds.lo | 1;
        if first < bounds.hi {
            let total = (bounds.hi - first).div_ceil(2) as usize;
            let mut done = 0;
            while done < total {
                let n = seg_slots.min(total - done);
                seg.sieve(first + 2 * done as u64, n, &base);
                sink.visit(&seg);
                done += n;
            }
        }
        (bounds, sink)
    };
    if cfg.threads <= 1 {
        return Ok(chunks.into_iter().map(run).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    Ok(pool.install(|| chunks.into_par_iter().map(run).collect()))
}

/// Lower members of twin pairs with `a <= p < b`. A pair counts at `p` even
/// when `p + 2 >= b`.
pub fn sieve_range(a: u64, b: u64, cfg: &SieveConfig) -> Result<Vec<u64>> {
    if a < 2 || a >= b {
        return Err(Error::InvalidRange { a, b });
    }
    if b - a > cfg.list_budget {
        return Err(Error::RangeTooLarge { span: b - a, budget: cfg.list_budget });
    }
    struct Collect(Vec<u64>);
    impl SegmentSink for Collect {
        fn visit(&mut self, segment: &Segment) {
            self.0.extend(segment.twins());
        }
    }
    let parts = scan_chunks(a, b, cfg, |_| Collect(Vec::new()))?;
    Ok(parts.into_iter().flat_map(|(_, c)| c.0).collect())
}

/// `pi(x)`, the number of primes `<= x`.
pub fn prime_count(x: u64, cfg: &SieveConfig) -> Result<u64> {
    if x < 2 {
        return Ok(0);
    }
    struct Count(u64);
    impl SegmentSink for Count {
        fn visit(&mut self, segment: &Segment) {
            self.0 += segment.prime_count();
        }
    }
    let parts = scan_chunks(3, x + 1, cfg, |_| Count(0))?;
    Ok(1 + parts.into_iter().map(|(_, c)| c.0).sum::<u64>())
}

/// `1/p + 1/(p + 2)`, outward rounded.
#[inline]
pub fn pair_reciprocal(p: u64) -> Interval {
    let a = Interval::from_u64(p).recip().expect("p > 0");
    let b = Interval::from_u64(p + 2).recip().expect("p > 0");
    a + b
}

struct CensusSink<'a> {
    thresholds: &'a [u64],
    cursor: usize,
    count: u64,
    acc: Interval,
    snapshots: Vec<(u64, Interval)>,
}

impl CensusSink<'_> {
    fn flush_below(&mut self, p: u64) {
        while self.cursor < self.thresholds.len() && self.thresholds[self.cursor] < p {
            self.snapshots.push((self.count, self.acc));
            self.cursor += 1;
        }
    }
}

impl SegmentSink for CensusSink<'_> {
    fn visit(&mut self, segment: &Segment) {
        for p in segment.twins() {
            self.flush_below(p);
            self.count += 1;
            self.acc = self.acc + pair_reciprocal(p);
        }
    }
}

/// Census at one threshold `x`: `pi2(x)` and an enclosure of `B(x)`.
pub fn census(x: u64, cfg: &SieveConfig) -> Result<TwinCensus> {
    Ok(census_series(&[x], cfg)?[0])
}

/// Censuses at several thresholds from a single sieve pass. Each result is
/// bit-identical to `census` at the same threshold.
pub fn census_series(thresholds: &[u64], cfg: &SieveConfig) -> Result<Vec<TwinCensus>> {
    let mut ts: Vec<u64> = thresholds.to_vec();
    ts.sort_unstable();
    ts.dedup();
    let Some(&max) = ts.last() else {
        return Ok(Vec::new());
    };
    if max >= MAX_LIMIT {
        return Err(Error::InvalidRange { a: 3, b: max });
    }
    let mut results = std::collections::BTreeMap::new();
    for &t in ts.iter().filter(|&&t| t < 3) {
        results.insert(t, TwinCensus { x: t, pi2: 0, brun_partial: Interval::ZERO });
    }
    let live: Vec<u64> = ts.iter().copied().filter(|&t| t >= 3).collect();
    let parts = scan_chunks(3, max + 1, cfg, |bounds| {
        let start = live.partition_point(|&t| t < bounds.lo);
        let end = live.partition_point(|&t| t < bounds.hi);
        CensusSink {
            thresholds: &live[start..end],
            cursor: 0,
            count: 0,
            acc: Interval::ZERO,
            snapshots: Vec::new(),
        }
    })?;
    let mut total_count = 0u64;
    let mut total_acc = Interval::ZERO;
    for (_, mut sink) in parts {
        sink.flush_below(u64::MAX);
        for (&t, &(count, acc)) in sink.thresholds.iter().zip(&sink.snapshots) {
            results.insert(
                t,
                TwinCensus { x: t, pi2: total_count + count, brun_partial: total_acc + acc },
            );
        }
        total_count += sink.count;
        total_acc = total_acc + sink.acc;
    }
    thresholds
        .iter()
        .map(|t| results.get(t).copied().ok_or(Error::InvalidRange { a: 3, b: *t }))
        .collect()
}
