//! The base polytope `R = {t in [0,tau]^k : sum t_i <= 1}` and its
//! chaos-perturbed enlargement
//! `R' = {t in [0,tau]^k : sum t_i <= 1 + delta * chi(frac(sum t_i))}`,
//! where `chi` is the iterated logistic map. `R` has an inclusion-exclusion
//! closed form; `R'` has a chaotic boundary and is measured by Monte Carlo
//! only.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chaos::{self, LogisticParams};
use crate::error::{Error, Result};
use crate::sampling;

/// Region parameters: dimension, box cap, chaos amplitude, logistic map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    pub k: usize,
    pub tau: f64,
    pub delta: f64,
    pub logistic: LogisticParams,
}

impl PolytopeSpec {
    /// `tau < 1` keeps `1/(1 - t_j)` bounded on the box; `delta <= 1` by
    /// convention.
    pub fn new(k: usize, tau: f64, delta: f64, logistic: LogisticParams) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("polytope dimension k must be >= 1"));
        }
        if !(tau > 0.0 && tau < 1.0) {
            return Err(Error::domain(format!("tau must lie in (0, 1), got {tau}")));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::domain(format!(
                "delta must lie in [0, 1], got {delta}"
            )));
        }
        LogisticParams::new(logistic.r, logistic.iterations)?;
        Ok(PolytopeSpec {
            k,
            tau,
            delta,
            logistic,
        })
    }

    fn check_dim(&self, t: &[f64]) -> Result<()> {
        if t.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: t.len(),
            });
        }
        Ok(())
    }

    /// Upper bound of the perturbed sum constraint at coordinate sum `s`:
    /// `1 + delta * chi(frac(s))`. The chaotic factor lies in `[0,1]`, so the
    /// bound is always >= 1 and `R` is contained in `R'`.
    pub fn perturbed_bound(&self, s: f64) -> f64 {
        let frac = s - s.floor();
        1.0 + self.delta * chaos::iterate_unchecked(frac, self.logistic.r, self.logistic.iterations)
    }
}

/// The coupling `tau = (1/2 + delta) / 4` between the box cap and the
/// distribution-improvement parameter. Provided as a helper; `tau` stays a
/// free parameter everywhere else.
pub fn tau_from_delta(delta: f64) -> f64 {
    (0.5 + delta) / 4.0
}

/// Membership in `R`.
pub fn in_base_region(t: &[f64], spec: &PolytopeSpec) -> Result<bool> {
    spec.check_dim(t)?;
    let mut sum = 0.0;
    for &x in t {
        if !(0.0..=spec.tau).contains(&x) {
            return Ok(false);
        }
        sum += x;
    }
    Ok(sum <= 1.0)
}

/// Membership in `R'`.
pub fn in_perturbed_region(t: &[f64], spec: &PolytopeSpec) -> Result<bool> {
    spec.check_dim(t)?;
    let mut sum = 0.0;
    for &x in t {
        if !(0.0..=spec.tau).contains(&x) {
            return Ok(false);
        }
        sum += x;
    }
    Ok(sum <= spec.perturbed_bound(sum))
}

/// A volume measurement, exact or Monte Carlo.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    /// Fraction of the box `[0, tau]^k` covered.
    pub box_fraction: f64,
    /// `box_fraction * tau^k`.
    pub absolute_volume: f64,
    pub hit_count: u64,
    pub samples: u64,
    /// Standard error of the absolute volume: `sqrt(f(1-f)/n) * tau^k`.
    /// Zero for exact values.
    pub std_error: f64,
}

/// Exact volume of `R` by inclusion-exclusion:
/// `(1/k!) * sum_j (-1)^j C(k,j) max(0, 1 - j*tau)^k`.
///
/// `tau >= 1` is allowed here (the full simplex, volume `1/k!`). When
/// `k*tau <= 1` the box lies inside the half-space and the volume is exactly
/// `tau^k`.
pub fn exact_base_volume(k: usize, tau: f64) -> VolumeEstimate {
    assert!(k >= 1, "exact_base_volume needs k >= 1");
    assert!(tau > 0.0, "exact_base_volume needs tau > 0");
    let tau_k = tau.powi(k as i32);
    let volume = if k as f64 * tau <= 1.0 {
        tau_k
    } else {
        // Alternating sum; fine in f64 for the moderate (k, tau) ranges this
        // crate works in, where the result is not vanishingly small next to
        // the individual terms.
        let mut sum = 0.0;
        let mut binom = 1.0; // C(k, j)
        for j in 0..=k {
            let rest = 1.0 - j as f64 * tau;
            if rest <= 0.0 {
                break;
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * binom * rest.powi(k as i32);
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        let mut factorial = 1.0;
        for i in 2..=k {
            factorial *= i as f64;
        }
        sum / factorial
    };
    VolumeEstimate {
        box_fraction: volume / tau_k,
        absolute_volume: volume,
        hit_count: 0,
        samples: 0,
        std_error: 0.0,
    }
}

/// Paired Monte Carlo estimates for `R` and `R'` from one uniform draw on
/// the box, plus their ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McVolume {
    pub base: VolumeEstimate,
    pub perturbed: VolumeEstimate,
    /// `|R'| / |R|`.
    pub ratio: f64,
}

/// Hit-or-miss volume of `R` and `R'` with `samples` uniform points on
/// `[0, tau]^k`. Deterministic for a fixed seed, independent of the worker
/// count.
pub fn mc_volume(spec: &PolytopeSpec, samples: u64, seed: u64) -> Result<McVolume> {
    if samples < 1_000 {
        return Err(Error::domain(format!(
            "volume estimation needs samples >= 10^3, got {samples}"
        )));
    }
    let k = spec.k;
    let counts = sampling::run_blocks(samples, seed, |rng, n| {
        let mut base_hits = 0u64;
        let mut pert_hits = 0u64;
        for _ in 0..n {
            let mut sum = 0.0;
            for _ in 0..k {
                sum += rng.random::<f64>() * spec.tau;
            }
            if sum <= 1.0 {
                base_hits += 1;
            }
            if sum <= spec.perturbed_bound(sum) {
                pert_hits += 1;
            }
        }
        (base_hits, pert_hits)
    });
    let base_hits: u64 = counts.iter().map(|c| c.0).sum();
    let pert_hits: u64 = counts.iter().map(|c| c.1).sum();
    if base_hits == 0 {
        return Err(Error::InsufficientSamples(
            "no samples landed in the base region; the volume ratio is undefined".into(),
        ));
    }
    let estimate = |hits: u64| {
        let f = hits as f64 / samples as f64;
        let tau_k = spec.tau.powi(k as i32);
        VolumeEstimate {
            box_fraction: f,
            absolute_volume: f * tau_k,
            hit_count: hits,
            samples,
            std_error: (f * (1.0 - f) / samples as f64).sqrt() * tau_k,
        }
    };
    let base = estimate(base_hits);
    let perturbed = estimate(pert_hits);
    let ratio = perturbed.box_fraction / base.box_fraction;
    Ok(McVolume {
        base,
        perturbed,
        ratio,
    })
}

/// Result of checking `|R'| <= (1+delta)^k / k! * exp(eps * sqrt(k))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeBoundCheck {
    pub passes: bool,
    /// Monte Carlo estimate of the absolute volume of `R'`.
    pub estimated_volume: f64,
    pub std_error: f64,
    pub bound: f64,
    pub eps: f64,
}

/// Checks the perturbed-volume bound with a 3-sigma allowance for Monte
/// Carlo noise: passes iff `|R'|_est <= bound + 3 * std_error`.
pub fn check_volume_bound(
    spec: &PolytopeSpec,
    eps: f64,
    samples: u64,
    seed: u64,
) -> Result<VolumeBoundCheck> {
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::domain(format!("eps must be >= 0, got {eps}")));
    }
    let mc = mc_volume(spec, samples, seed)?;
    let k = spec.k;
    let mut factorial = 1.0;
    for i in 2..=k {
        factorial *= i as f64;
    }
    let bound = (1.0 + spec.delta).powi(k as i32) / factorial * (eps * (k as f64).sqrt()).exp();
    let estimated = mc.perturbed.absolute_volume;
    let std_error = mc.perturbed.std_error;
    Ok(VolumeBoundCheck {
        passes: estimated <= bound + 3.0 * std_error,
        estimated_volume: estimated,
        std_error,
        bound,
        eps,
    })
}

/// JSON report for a volume run. Volumes are box fractions, matching the
/// hit-rate convention of the Monte Carlo estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeReport {
    pub k: usize,
    pub tau: f64,
    pub delta: f64,
    pub iterations: u32,
    pub r: f64,
    pub samples: u64,
    pub seed: u64,
    #[serde(rename = "vol_R")]
    pub vol_r: f64,
    #[serde(rename = "vol_Rp")]
    pub vol_rp: f64,
    pub ratio: f64,
    pub std_errors: VolumeStdErrors,
}

/// Standard errors of the two box fractions (same units as `vol_R`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeStdErrors {
    pub base: f64,
    pub perturbed: f64,
}

pub fn volume_report(spec: &PolytopeSpec, samples: u64, seed: u64, mc: &McVolume) -> VolumeReport {
    VolumeReport {
        k: spec.k,
        tau: spec.tau,
        delta: spec.delta,
        iterations: spec.logistic.iterations,
        r: spec.logistic.r,
        samples,
        seed,
        vol_r: mc.base.box_fraction,
        vol_rp: mc.perturbed.box_fraction,
        ratio: mc.ratio,
        std_errors: VolumeStdErrors {
            base: mc.base.std_error / spec.tau.powi(spec.k as i32),
            perturbed: mc.perturbed.std_error / spec.tau.powi(spec.k as i32),
        },
    }
}
