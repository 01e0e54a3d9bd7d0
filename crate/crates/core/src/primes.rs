//! Prime enumeration and prime-gap statistics.
//!
//! The sieve is a segmented sieve of Eratosthenes over odd numbers with
//! bit-packed segments. The default segment of 2^18 bytes tracks 2^21 odd
//! candidates (a span of 2^22 integers) and fits comfortably in L2 cache.
//! Segments are independent work units processed in parallel; results are
//! merged in segment order, so any worker count produces identical output.
//!
//! Gap statistics are accumulated per segment without materialising the full
//! prime list, which keeps `gap_summary` usable far beyond the point where
//! `enumerate_primes` would exhaust memory.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default segment size in bytes (2^18, sized for L2 cache).
pub const DEFAULT_SEGMENT_BYTES: usize = 1 << 18;

/// Largest supported exclusive limit. Segments index odd candidates in
/// 64-bit space, so the ceiling is a practicality cap, not a structural one:
/// beyond it, run times (and for `enumerate_primes`, memory) stop being
/// reasonable on a workstation.
pub const LIMIT_CEILING: u64 = 1_000_000_000_000;

/// How many of the most frequent gaps a summary reports.
pub const DEFAULT_TOP_GAPS: usize = 10;

/// Gap statistics for all primes strictly below `limit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeGapSummary {
    pub limit: u64,
    pub prime_count: u64,
    pub max_gap: u64,
    pub min_gap: u64,
    /// `(threshold, fraction of gaps <= threshold)`, ascending by threshold.
    pub threshold_fractions: Vec<(u64, f64)>,
    /// `(gap, count)` for the most common gaps, descending by count with
    /// ties broken by ascending gap value.
    pub top_gaps: Vec<(u64, u64)>,
}

/// Primes strictly below `limit`, in increasing order.
pub fn enumerate_primes(limit: u64) -> Result<Vec<u64>> {
    enumerate_primes_with_segment(limit, DEFAULT_SEGMENT_BYTES)
}

/// [`enumerate_primes`] with an explicit segment size. The segment size must
/// not change the result; it only trades memory locality.
pub fn enumerate_primes_with_segment(limit: u64, segment_bytes: usize) -> Result<Vec<u64>> {
    let sieve = Segmented::new(limit, segment_bytes)?;
    let mut per_segment: Vec<Vec<u64>> = (0..sieve.n_segments)
        .into_par_iter()
        .map(|s| sieve.segment_primes(s))
        .collect();
    let mut primes = Vec::with_capacity(expected_prime_count(limit));
    if limit > 2 {
        primes.push(2);
    }
    for seg in per_segment.iter_mut() {
        primes.append(seg);
    }
    Ok(primes)
}

/// Gap summary with the default segment size and top-gap count.
pub fn gap_summary(limit: u64, thresholds: &[u64]) -> Result<PrimeGapSummary> {
    gap_summary_with(limit, thresholds, DEFAULT_TOP_GAPS, DEFAULT_SEGMENT_BYTES)
}

/// Streaming gap summary: consecutive-prime differences for primes < `limit`.
///
/// Fractions are `(count of gaps <= T) / (total gaps)`; thresholds are
/// deduplicated and reported in ascending order.
pub fn gap_summary_with(
    limit: u64,
    thresholds: &[u64],
    top_count: usize,
    segment_bytes: usize,
) -> Result<PrimeGapSummary> {
    if limit < 3 {
        return Err(Error::domain(format!(
            "gap summary needs limit >= 3, got {limit}"
        )));
    }
    if thresholds.contains(&0) {
        return Err(Error::domain("gap thresholds must be positive"));
    }
    let (tally, prime_count) = gap_tally(limit, segment_bytes)?;
    let total_gaps: u64 = tally.values().sum();
    if prime_count < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 primes below the limit, found {prime_count}"
        )));
    }
    debug_assert_eq!(total_gaps, prime_count - 1);

    let mut sorted_thresholds: Vec<u64> = thresholds.to_vec();
    sorted_thresholds.sort_unstable();
    sorted_thresholds.dedup();
    let threshold_fractions = sorted_thresholds
        .into_iter()
        .map(|t| {
            let below: u64 = tally.range(..=t).map(|(_, c)| c).sum();
            (t, below as f64 / total_gaps as f64)
        })
        .collect();

    Ok(PrimeGapSummary {
        limit,
        prime_count,
        max_gap: *tally.keys().max().expect("at least one gap"),
        min_gap: *tally.keys().min().expect("at least one gap"),
        threshold_fractions,
        top_gaps: rank_gaps(&tally, top_count),
    })
}

/// The `count` most frequent gaps below `limit`, descending by frequency,
/// ties broken by ascending gap value.
pub fn top_gap_frequencies(limit: u64, count: usize) -> Result<Vec<(u64, u64)>> {
    if limit < 3 {
        return Err(Error::domain(format!(
            "gap statistics need limit >= 3, got {limit}"
        )));
    }
    if count == 0 {
        return Err(Error::domain("top-gap count must be >= 1"));
    }
    let (tally, prime_count) = gap_tally(limit, DEFAULT_SEGMENT_BYTES)?;
    if prime_count < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 primes below the limit, found {prime_count}"
        )));
    }
    Ok(rank_gaps(&tally, count))
}

/// Full gap histogram `(gap, count)` ascending by gap.
pub fn gap_histogram(limit: u64, segment_bytes: usize) -> Result<Vec<(u64, u64)>> {
    if limit < 3 {
        return Err(Error::domain(format!(
            "gap statistics need limit >= 3, got {limit}"
        )));
    }
    let (tally, prime_count) = gap_tally(limit, segment_bytes)?;
    if prime_count < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 primes below the limit, found {prime_count}"
        )));
    }
    Ok(tally.into_iter().collect())
}

/// Writes a histogram as CSV: header `gap,count`, rows ascending by gap.
pub fn write_gap_csv<W: Write>(mut w: W, histogram: &[(u64, u64)]) -> std::io::Result<()> {
    writeln!(w, "gap,count")?;
    for (gap, count) in histogram {
        writeln!(w, "{gap},{count}")?;
    }
    Ok(())
}

fn rank_gaps(tally: &BTreeMap<u64, u64>, count: usize) -> Vec<(u64, u64)> {
    let mut ranked: Vec<(u64, u64)> = tally.iter().map(|(&g, &c)| (g, c)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(count);
    ranked
}

/// Merged gap tally plus total prime count for primes < `limit`.
fn gap_tally(limit: u64, segment_bytes: usize) -> Result<(BTreeMap<u64, u64>, u64)> {
    let sieve = Segmented::new(limit, segment_bytes)?;
    let stats: Vec<SegmentStats> = (0..sieve.n_segments)
        .into_par_iter()
        .map(|s| sieve.segment_stats(s))
        .collect();

    let mut tally: BTreeMap<u64, u64> = BTreeMap::new();
    let mut prime_count: u64 = 0;
    let mut prev: Option<u64> = None;
    if limit > 2 {
        prime_count = 1;
        prev = Some(2);
    }
    // Sequential merge in segment order: boundary gaps span segments.
    for seg in stats {
        if seg.count == 0 {
            continue;
        }
        if let Some(p) = prev {
            *tally.entry(seg.first - p).or_insert(0) += 1;
        }
        for (gap, count) in seg.tally {
            *tally.entry(gap).or_insert(0) += count;
        }
        prime_count += seg.count;
        prev = Some(seg.last);
    }
    Ok((tally, prime_count))
}

fn expected_prime_count(limit: u64) -> usize {
    if limit < 10 {
        return 8;
    }
    let x = limit as f64;
    (x / x.ln() * 1.15) as usize
}

/// Simple odd-only sieve for the base primes (p <= sqrt(limit)).
fn small_odd_primes(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = ((bound - 3) / 2 + 1) as usize; // odd numbers 3, 5, ..., <= bound
    let mut composite = vec![false; n];
    let mut primes = Vec::new();
    for i in 0..n {
        if composite[i] {
            continue;
        }
        let p = 3 + 2 * i as u64;
        primes.push(p);
        let mut j = (p * p - 3) / 2;
        while (j as usize) < n {
            composite[j as usize] = true;
            j += p;
        }
    }
    primes
}

struct SegmentStats {
    first: u64,
    last: u64,
    count: u64,
    tally: Vec<(u64, u64)>,
}

/// Shared state of one segmented run: base primes and segment geometry.
/// Bit `i` of a segment represents the odd number `3 + 2*(segment_base + i)`;
/// a set bit marks a composite.
struct Segmented {
    base: Vec<u64>,
    n_odds: u64,
    bits_per_segment: u64,
    n_segments: u64,
}

impl Segmented {
    fn new(limit: u64, segment_bytes: usize) -> Result<Self> {
        if limit > LIMIT_CEILING {
            return Err(Error::Capacity(format!(
                "limit {limit} exceeds the supported ceiling {LIMIT_CEILING}"
            )));
        }
        if segment_bytes < 8 {
            return Err(Error::domain("segment size must be at least 8 bytes"));
        }
        let n_odds = if limit <= 3 {
            0
        } else {
            (limit - 3).div_ceil(2)
        };
        let sqrt = (limit.max(1) as f64).sqrt() as u64 + 1;
        let bits_per_segment = (segment_bytes * 8) as u64;
        Ok(Segmented {
            base: small_odd_primes(sqrt),
            n_odds,
            bits_per_segment,
            n_segments: n_odds.div_ceil(bits_per_segment),
        })
    }

    /// Index range [lo, hi) of odd candidates covered by segment `s`.
    fn bounds(&self, s: u64) -> (u64, u64) {
        let lo = s * self.bits_per_segment;
        (lo, (lo + self.bits_per_segment).min(self.n_odds))
    }

    /// Composite mask for segment `s`.
    fn sieve_segment(&self, s: u64) -> Vec<u64> {
        let (lo, hi) = self.bounds(s);
        let n_bits = (hi - lo) as usize;
        let mut words = vec![0u64; n_bits.div_ceil(64)];
        let lo_value = 3 + 2 * lo;
        let hi_value = 3 + 2 * hi; // exclusive
        for &p in &self.base {
            if p * p >= hi_value {
                break;
            }
            // First odd multiple of p that is >= max(p^2, lo_value).
            let mut m = p * p;
            if m < lo_value {
                m = lo_value.div_ceil(p) * p;
                if m % 2 == 0 {
                    m += p;
                }
            }
            if m >= hi_value {
                continue;
            }
            let mut i = ((m - 3) / 2 - lo) as usize;
            // Step p in index space == step 2p in value space.
            while i < n_bits {
                words[i >> 6] |= 1 << (i & 63);
                i += p as usize;
            }
        }
        words
    }

    fn for_each_prime(&self, s: u64, mut f: impl FnMut(u64)) {
        let (lo, hi) = self.bounds(s);
        if lo >= hi {
            return;
        }
        let words = self.sieve_segment(s);
        let n_bits = (hi - lo) as usize;
        for (w, &word) in words.iter().enumerate() {
            let mut free = !word;
            // Mask tail bits beyond the segment.
            if (w + 1) * 64 > n_bits {
                free &= (1u64 << (n_bits - w * 64)) - 1;
            }
            while free != 0 {
                let bit = free.trailing_zeros() as usize;
                f(3 + 2 * (lo + (w * 64 + bit) as u64));
                free &= free - 1;
            }
        }
    }

    fn segment_primes(&self, s: u64) -> Vec<u64> {
        let mut out = Vec::new();
        self.for_each_prime(s, |p| out.push(p));
        out
    }

    fn segment_stats(&self, s: u64) -> SegmentStats {
        let mut first = 0;
        let mut last = 0;
        let mut count = 0u64;
        let mut tally: BTreeMap<u64, u64> = BTreeMap::new();
        self.for_each_prime(s, |p| {
            if count == 0 {
                first = p;
            } else {
                *tally.entry(p - last).or_insert(0) += 1;
            }
            last = p;
            count += 1;
        });
        SegmentStats {
            first,
            last,
            count,
            tally: tally.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent oracle: trial division.
    pub(crate) fn naive_primes(limit: u64) -> Vec<u64> {
        let mut primes = Vec::new();
        for n in 2..limit {
            let mut is_prime = n >= 2;
            let mut d = 2;
            while d * d <= n {
                if n % d == 0 {
                    is_prime = false;
                    break;
                }
                d += 1;
            }
            if is_prime {
                primes.push(n);
            }
        }
        primes
    }

    #[test]
    fn small_cases() {
        assert_eq!(enumerate_primes(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(enumerate_primes(2).unwrap(), Vec::<u64>::new());
        assert_eq!(enumerate_primes(0).unwrap(), Vec::<u64>::new());
        assert_eq!(enumerate_primes(3).unwrap(), vec![2]);
        assert_eq!(enumerate_primes(4).unwrap(), vec![2, 3]);
    }

    #[test]
    fn hundred_primes() {
        let primes = enumerate_primes(100).unwrap();
        assert_eq!(primes.len(), 25);
        assert_eq!(*primes.last().unwrap(), 97);
        assert_eq!(primes, naive_primes(100));
    }

    #[test]
    fn matches_naive_oracle_across_limits() {
        let oracle = naive_primes(3000);
        for limit in 0..300u64 {
            let want: Vec<u64> = oracle.iter().copied().filter(|&p| p < limit).collect();
            assert_eq!(enumerate_primes(limit).unwrap(), want, "limit {limit}");
        }
        for limit in [1009, 1024, 2047, 2048, 2999] {
            let want: Vec<u64> = oracle.iter().copied().filter(|&p| p < limit).collect();
            assert_eq!(enumerate_primes(limit).unwrap(), want, "limit {limit}");
        }
    }

    #[test]
    fn segment_size_does_not_matter() {
        let reference = gap_summary_with(200_000, &[8, 100], 10, DEFAULT_SEGMENT_BYTES).unwrap();
        for bytes in [8usize, 64, 1000, 4096, 1 << 20] {
            assert_eq!(
                gap_summary_with(200_000, &[8, 100], 10, bytes).unwrap(),
                reference,
                "segment_bytes {bytes}"
            );
            assert_eq!(
                enumerate_primes_with_segment(200_000, bytes).unwrap(),
                enumerate_primes(200_000).unwrap()
            );
        }
    }

    #[test]
    fn limit_ceiling_enforced() {
        assert!(matches!(
            enumerate_primes(LIMIT_CEILING + 1),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn gap_summary_small() {
        // Primes below 100: 25 primes, 24 gaps, max gap 8 (89 -> 97).
        let s = gap_summary(100, &[8]).unwrap();
        assert_eq!(s.prime_count, 25);
        assert_eq!(s.max_gap, 8);
        assert_eq!(s.min_gap, 1);
        assert_eq!(s.threshold_fractions, vec![(8, 1.0)]);

        // Primes 2, 3, 5: gaps 1 and 2.
        let s = gap_summary(6, &[1]).unwrap();
        assert_eq!(s.threshold_fractions, vec![(1, 0.5)]);
        assert_eq!(s.prime_count, 3);
    }

    #[test]
    fn gap_summary_errors() {
        assert!(matches!(gap_summary(2, &[8]), Err(Error::Domain(_))));
        assert!(matches!(gap_summary(100, &[0]), Err(Error::Domain(_))));
        // limit = 3 has exactly one prime below it.
        assert!(matches!(
            gap_summary(3, &[8]),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn gap_counts_sum_to_prime_count_minus_one() {
        for limit in [100u64, 1000, 65537] {
            let hist = gap_histogram(limit, DEFAULT_SEGMENT_BYTES).unwrap();
            let s = gap_summary(limit, &[2]).unwrap();
            let total: u64 = hist.iter().map(|&(_, c)| c).sum();
            assert_eq!(total, s.prime_count - 1);
        }
    }

    #[test]
    fn all_gaps_even_except_first() {
        let hist = gap_histogram(100_000, DEFAULT_SEGMENT_BYTES).unwrap();
        for (gap, count) in hist {
            if gap % 2 == 1 {
                assert_eq!((gap, count), (1, 1), "only 2 -> 3 may be odd");
            }
        }
    }

    #[test]
    fn top_gaps_tie_break_ascending() {
        // Below 100 the tally is: gap 2 x8, gap 4 x7, gap 6 x7, ...
        let top = top_gap_frequencies(100, 3).unwrap();
        assert_eq!(top, vec![(2, 8), (4, 7), (6, 7)]);
        // Only the gap 2 -> 3 exists below 4.
        assert_eq!(top_gap_frequencies(4, 5).unwrap(), vec![(1, 1)]);
    }

    #[test]
    fn fractions_non_decreasing_and_saturating() {
        let s = gap_summary(100_000, &[2, 4, 8, 16, 1000]).unwrap();
        for pair in s.threshold_fractions.windows(2) {
            assert!(pair[0].1 <= pair[1].1);
        }
        assert_eq!(s.threshold_fractions.last().unwrap().1, 1.0);
    }

    /// The documented ceiling claims segmented support well past 1e10;
    /// expensive, so opt-in: `cargo test -p sievelab -- --ignored ten_billion`.
    #[test]
    #[ignore]
    fn ten_billion_gap_summary() {
        let s = gap_summary(10_000_000_000, &[8, 100, 400]).unwrap();
        assert_eq!(s.prime_count, 455_052_511); // pi(1e10)
                                                // Record gap below 1e10: 354 (after 4302407359); the next record
                                                // (382) first occurs past 1e10.
        assert_eq!(s.max_gap, 354);
        assert_eq!(s.min_gap, 1);
    }

    #[test]
    fn csv_export_shape() {
        let hist = gap_histogram(100, DEFAULT_SEGMENT_BYTES).unwrap();
        let mut buf = Vec::new();
        write_gap_csv(&mut buf, &hist).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("gap,count"));
        assert_eq!(lines.next(), Some("1,1"));
        assert_eq!(lines.next(), Some("2,8"));
    }
}
