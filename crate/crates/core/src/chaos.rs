//! Logistic-map dynamics and orbit diagnostics.
//!
//! The map `y -> r*y*(1-y)` preserves `[0,1]` for `r <= 4`. At `r = 4` it is
//! ergodic with the arcsine invariant density `1/(pi*sqrt(y*(1-y)))`;
//! [`invariant_density_distance`] measures how far an empirical orbit sits
//! from that law. At the working parameter `r = 3.9` the attractor lies in
//! `[r^2*(4-r)/16, r/4] ~= [0.0951, 0.975]`, so orbits stay bounded away
//! from 0 and 1; [`OrbitStats::eta_margin`] reports the observed margin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default initial point for diagnostics. Chosen away from the exceptional
/// set (0, 1, the fixed points `0` and `1 - 1/r`, and their preimages such
/// as 0.5 for r = 4, which maps to 1 and then to 0).
pub const DEFAULT_Y0: f64 = 0.123456789;

/// Default number of iterates discarded before collecting statistics.
pub const DEFAULT_BURN_IN: u64 = 1_000;

/// Logistic-map parameters: growth rate and iteration depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub r: f64,
    pub iterations: u32,
}

impl LogisticParams {
    pub fn new(r: f64, iterations: u32) -> Result<Self> {
        if !(r > 0.0 && r <= 4.0) {
            return Err(Error::domain(format!(
                "logistic parameter r must be in (0, 4], got {r}"
            )));
        }
        if iterations == 0 {
            return Err(Error::domain("logistic iteration count must be >= 1"));
        }
        Ok(LogisticParams { r, iterations })
    }
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            r: 3.9,
            iterations: 5,
        }
    }
}

/// One application of the map. Errors on inputs outside `[0,1]` or `r`
/// outside `(0,4]`.
pub fn logistic_step(y: f64, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&y) {
        return Err(Error::domain(format!(
            "logistic input must be in [0,1], got {y}"
        )));
    }
    if !(r > 0.0 && r <= 4.0) {
        return Err(Error::domain(format!(
            "logistic parameter r must be in (0, 4], got {r}"
        )));
    }
    let next = r * y * (1.0 - y);
    debug_assert!((0.0..=1.0).contains(&next));
    Ok(next)
}

/// `p.iterations`-fold composition of [`logistic_step`].
pub fn logistic_iterate(y0: f64, p: &LogisticParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&y0) {
        return Err(Error::domain(format!(
            "logistic input must be in [0,1], got {y0}"
        )));
    }
    Ok(iterate_unchecked(y0, p.r, p.iterations))
}

/// Hot-loop variant: caller guarantees `y in [0,1]` and `r in (0,4]`.
#[inline]
pub(crate) fn iterate_unchecked(mut y: f64, r: f64, iterations: u32) -> f64 {
    for _ in 0..iterations {
        y = r * y * (1.0 - y);
    }
    y
}

/// Statistics of a logistic orbit after burn-in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitStats {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `(bin lower edge, count)` over `[0,1]`.
    pub histogram: Vec<(f64, u64)>,
    /// Distance of the post-burn-in orbit from {0, 1}: `min(min, 1 - max)`.
    pub eta_margin: f64,
    /// Set when the orbit hits 0 exactly (it then stays there forever).
    pub degenerate: bool,
}

/// Statistics over the iterates `burn_in+1 ..= n` of the orbit of `y0`.
///
/// A degenerate orbit (one that reaches exactly 0) is flagged in the result
/// rather than reported as an error.
pub fn orbit_statistics(y0: f64, r: f64, n: u64, burn_in: u64, bins: usize) -> Result<OrbitStats> {
    if n <= burn_in {
        return Err(Error::domain(format!(
            "orbit length n={n} must exceed burn_in={burn_in}"
        )));
    }
    if bins == 0 {
        return Err(Error::domain("histogram needs at least one bin"));
    }
    logistic_step(y0, r)?; // validates both y0 and r

    let mut y = y0;
    let mut degenerate = false;
    for _ in 0..burn_in {
        y = r * y * (1.0 - y);
    }
    let count = n - burn_in;
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut hist = vec![0u64; bins];
    for _ in 0..count {
        y = r * y * (1.0 - y);
        if y == 0.0 {
            degenerate = true;
        }
        sum += y;
        min = min.min(y);
        max = max.max(y);
        let bin = ((y * bins as f64) as usize).min(bins - 1);
        hist[bin] += 1;
    }
    Ok(OrbitStats {
        mean: sum / count as f64,
        min,
        max,
        histogram: hist
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i as f64 / bins as f64, c))
            .collect(),
        eta_margin: min.min(1.0 - max),
        degenerate,
    })
}

/// Analytic arcsine-law mass of the bin `[a, b]`:
/// `(2/pi) * (asin(sqrt(b)) - asin(sqrt(a)))`.
pub fn arcsine_bin_mass(a: f64, b: f64) -> f64 {
    (2.0 / std::f64::consts::PI) * (b.sqrt().asin() - a.sqrt().asin())
}

/// Sup-distance between empirical bin masses of an `n`-iterate orbit (with
/// the default burn-in and initial point) and the arcsine-law bin masses.
pub fn invariant_density_distance(r: f64, n: u64, bins: usize) -> Result<f64> {
    if n < 10_000 {
        return Err(Error::domain(format!(
            "density comparison needs n >= 10^4 iterates, got {n}"
        )));
    }
    let stats = orbit_statistics(DEFAULT_Y0, r, n + DEFAULT_BURN_IN, DEFAULT_BURN_IN, bins)?;
    let total: u64 = stats.histogram.iter().map(|&(_, c)| c).sum();
    let mut sup = 0.0f64;
    for (i, &(edge, count)) in stats.histogram.iter().enumerate() {
        let hi = if i + 1 == bins {
            1.0
        } else {
            (i + 1) as f64 / bins as f64
        };
        let empirical = count as f64 / total as f64;
        sup = sup.max((empirical - arcsine_bin_mass(edge, hi)).abs());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_fixed_points() {
        assert_eq!(logistic_step(0.0, 3.9).unwrap(), 0.0);
        assert_eq!(logistic_step(0.75, 4.0).unwrap(), 0.75);
        // Direct arithmetic: 3.9 * 0.25.
        assert!((logistic_step(0.5, 3.9).unwrap() - 0.975).abs() < 1e-15);
    }

    #[test]
    fn step_domain_errors() {
        assert!(logistic_step(-0.1, 3.9).is_err());
        assert!(logistic_step(1.1, 3.9).is_err());
        assert!(logistic_step(0.5, 4.1).is_err());
        assert!(logistic_step(0.5, 0.0).is_err());
        assert!(logistic_step(f64::NAN, 3.9).is_err());
    }

    #[test]
    fn iterate_matches_hand_unrolled_chain() {
        let p = LogisticParams::new(3.9, 2).unwrap();
        assert_eq!(logistic_iterate(0.0, &p).unwrap(), 0.0);
        // 3.9 * 0.975 * 0.025 with the same rounding as the loop.
        let y1 = 3.9 * 0.5 * 0.5;
        let y2 = 3.9 * y1 * (1.0 - y1);
        assert_eq!(logistic_iterate(0.5, &p).unwrap(), y2);
        assert!((y2 - 0.0950625).abs() < 1e-15);

        // Five explicit compositions from 0.3 (value cross-checked against
        // exact decimal arithmetic: 0.57828304796264597654).
        let p5 = LogisticParams::default();
        let mut y = 0.3;
        for _ in 0..5 {
            y = 3.9 * y * (1.0 - y);
        }
        let got = logistic_iterate(0.3, &p5).unwrap();
        assert_eq!(got, y);
        assert!((got - 0.578283047962646).abs() < 1e-11);
    }

    #[test]
    fn params_validation() {
        assert!(LogisticParams::new(4.0, 5).is_ok());
        assert!(LogisticParams::new(4.2, 5).is_err());
        assert!(LogisticParams::new(3.9, 0).is_err());
    }

    #[test]
    fn range_preservation_along_orbit() {
        for r in [0.5, 2.0, 3.57, 3.9, 4.0] {
            let mut y = DEFAULT_Y0;
            for _ in 0..10_000 {
                y = r * y * (1.0 - y);
                assert!((0.0..=1.0).contains(&y), "escaped [0,1] at r={r}");
            }
        }
    }

    #[test]
    fn fixed_point_orbit_is_constant() {
        let s = orbit_statistics(0.75, 4.0, 1000, 10, 10).unwrap();
        assert_eq!(s.mean, 0.75);
        assert_eq!(s.min, 0.75);
        assert_eq!(s.max, 0.75);
        assert!(!s.degenerate);
    }

    #[test]
    fn degenerate_orbit_flagged() {
        // 0.5 -> 1 -> 0 under r = 4.
        let s = orbit_statistics(0.5, 4.0, 100, 0, 10).unwrap();
        assert!(s.degenerate);
        assert_eq!(s.min, 0.0);
    }

    #[test]
    fn orbit_stats_invariants() {
        let s = orbit_statistics(DEFAULT_Y0, 3.9, 50_000, 1_000, 20).unwrap();
        assert!(0.0 <= s.min && s.min <= s.mean && s.mean <= s.max && s.max <= 1.0);
        let total: u64 = s.histogram.iter().map(|&(_, c)| c).sum();
        assert_eq!(total, 49_000);
        // Attractor range [r^2(4-r)/16, r/4] = [0.0950625, 0.975].
        assert!(s.min >= 0.09, "min {}", s.min);
        assert!(s.max <= 0.98, "max {}", s.max);
        assert!(s.eta_margin >= 0.02, "eta margin {}", s.eta_margin);
    }

    #[test]
    fn r4_mean_near_half() {
        let s = orbit_statistics(DEFAULT_Y0, 4.0, 1_000_000, 1_000, 10).unwrap();
        assert!(!s.degenerate);
        assert!((s.mean - 0.5).abs() < 0.01, "mean {}", s.mean);
    }

    #[test]
    fn orbit_precondition_errors() {
        assert!(orbit_statistics(0.1, 3.9, 10, 10, 10).is_err());
        assert!(orbit_statistics(0.1, 3.9, 100, 10, 0).is_err());
        assert!(orbit_statistics(1.5, 3.9, 100, 10, 10).is_err());
    }

    #[test]
    fn arcsine_masses_sum_to_one() {
        let bins = 10;
        let sum: f64 = (0..bins)
            .map(|i| arcsine_bin_mass(i as f64 / bins as f64, (i + 1) as f64 / bins as f64))
            .sum();
        assert!((sum - 1.0).abs() < 1e-12);
        // Frozen analytic values for the outer and inner bins.
        assert!((arcsine_bin_mass(0.0, 0.1) - 0.20483276469913345).abs() < 1e-14);
        assert!((arcsine_bin_mass(0.4, 0.5) - 0.06409421684897493).abs() < 1e-14);
    }

    #[test]
    fn density_distance_small_at_r4() {
        let d = invariant_density_distance(4.0, 1_000_000, 10).unwrap();
        assert!(d <= 0.01, "distance {d}");
        // Consistency direction: short orbits are farther on average.
        let d_short = invariant_density_distance(4.0, 10_000, 10).unwrap();
        assert!(d_short >= d);
    }

    #[test]
    fn density_distance_single_bin_is_zero() {
        let d = invariant_density_distance(4.0, 10_000, 1).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn density_distance_needs_enough_iterates() {
        assert!(invariant_density_distance(4.0, 100, 10).is_err());
    }
}
