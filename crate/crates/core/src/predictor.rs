//! Closed-form heuristic calculators: the perturbed-ratio asymptotic, the
//! additive baseline extrapolation, the gap-length ansatz, and the heuristic
//! gap bound.
//!
//! All four are pure arithmetic in the inputs. Where the source experiment's
//! own worked numbers disagree with its stated formulas (the extrapolation
//! is quoted both additively and multiplicatively), the report carries the
//! computed value and emits the quoted one as a `paper_claimed` comparison
//! field; nothing is reconciled silently.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratio::prime_floor;
use crate::reference;

/// `M'(k, delta, eps) = ln(k)/4 + delta/2 + eps * ln(ln(k))`.
pub fn m_prime_asymptotic(k: u64, delta: f64, eps: f64) -> Result<f64> {
    check_params(delta, eps)?;
    if k < 3 {
        return Err(Error::domain(format!(
            "the asymptotic needs k >= 3 (ln ln k > 0), got {k}"
        )));
    }
    let lnk = (k as f64).ln();
    Ok(lnk / 4.0 + delta / 2.0 + eps * lnk.ln())
}

/// Additive extrapolation from an externally supplied baseline:
/// `m_base + delta/2 + eps * ln(ln(k))`.
pub fn extrapolate_m(m_base: f64, k: u64, delta: f64, eps: f64) -> Result<f64> {
    check_params(delta, eps)?;
    if m_base.is_nan() || m_base <= 0.0 {
        return Err(Error::domain(format!(
            "baseline ratio must be positive, got {m_base}"
        )));
    }
    if k < 3 {
        return Err(Error::domain(format!(
            "extrapolation needs k >= 3 (ln ln k > 0), got {k}"
        )));
    }
    Ok(m_base + delta / 2.0 + eps * (k as f64).ln().ln())
}

/// Gap-length ansatz `H(k, delta, eps) = k ln(k) / exp(2*delta - eps)`.
pub fn gap_ansatz(k: u64, delta: f64, eps: f64) -> Result<f64> {
    check_params(delta, eps)?;
    if k < 2 {
        return Err(Error::domain(format!(
            "the gap ansatz needs k >= 2, got {k}"
        )));
    }
    Ok(k as f64 * (k as f64).ln() / (2.0 * delta - eps).exp())
}

/// Heuristic gap bound `exp(2*delta - eps) * ln(e^(2/delta))`, i.e.
/// `exp(2*delta - eps) * 2/delta`. Undefined at `delta = 0`.
pub fn conjecture_bound(delta: f64, eps: f64) -> Result<f64> {
    check_params(delta, eps)?;
    if delta == 0.0 {
        return Err(Error::domain(
            "the heuristic bound divides by delta; delta must be positive",
        ));
    }
    Ok((2.0 * delta - eps).exp() * 2.0 / delta)
}

/// Smallest listed `k` whose extrapolated ratio exceeds the integer level
/// `m`, scanning a `(k, m_base)` baseline table sorted by `k`.
pub fn min_k_for_level(
    m: u64,
    baseline: &[(u64, f64)],
    delta: f64,
    eps: f64,
) -> Result<Option<u64>> {
    if baseline.is_empty() {
        return Err(Error::domain("the baseline table must be non-empty"));
    }
    if baseline.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::domain("the baseline table must be sorted by k"));
    }
    for &(k, m_base) in baseline {
        if extrapolate_m(m_base, k, delta, eps)? > m as f64 {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

fn check_params(delta: f64, eps: f64) -> Result<()> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::domain(format!("delta must be >= 0, got {delta}")));
    }
    if eps.is_nan() || eps < 0.0 {
        return Err(Error::domain(format!("eps must be >= 0, got {eps}")));
    }
    Ok(())
}

/// A quoted number from the source experiment next to the value this crate
/// computes for the same inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperClaim {
    pub quantity: String,
    pub claimed: f64,
    pub computed: f64,
    /// `computed - claimed`.
    pub divergence: f64,
}

/// All formula outputs for one `(k, delta, eps)` configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub k: u64,
    pub delta: f64,
    pub eps: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_base: Option<f64>,
    pub m_prime_asymptotic: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_prime_extrapolated: Option<f64>,
    pub h_ansatz: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjecture_bound: Option<f64>,
    /// Largest integer strictly below the best available ratio estimate.
    pub prime_floor: i64,
    /// Quoted reference numbers for these inputs, with divergences.
    pub paper_claimed: Vec<PaperClaim>,
}

/// Evaluates every formula for one configuration and attaches the quoted
/// reference values that apply to it.
pub fn predict(k: u64, delta: f64, eps: f64, m_base: Option<f64>) -> Result<PredictionReport> {
    let m_prime = m_prime_asymptotic(k, delta, eps)?;
    let extrapolated = match m_base {
        Some(base) => Some(extrapolate_m(base, k, delta, eps)?),
        None => None,
    };
    let h = gap_ansatz(k, delta, eps)?;
    let bound = if delta > 0.0 {
        Some(conjecture_bound(delta, eps)?)
    } else {
        None
    };

    let mut claims = Vec::new();
    let close = |a: f64, b: f64| (a - b).abs() < 1e-9;
    for c in reference::PREDICTOR_CLAIMS {
        if c.k.is_some_and(|ck| ck != k) || !close(c.delta, delta) || !close(c.eps, eps) {
            continue;
        }
        let computed = match c.quantity {
            reference::ClaimQuantity::MPrimeAsymptotic => Some(m_prime),
            reference::ClaimQuantity::MPrimeExtrapolated => match (m_base, c.m_base) {
                (Some(base), Some(cb)) if close(base, cb) => extrapolated,
                _ => None,
            },
            reference::ClaimQuantity::GapAnsatz => Some(h),
            reference::ClaimQuantity::ConjectureBound => bound,
        };
        if let Some(computed) = computed {
            claims.push(PaperClaim {
                quantity: c.quantity.name().to_string(),
                claimed: c.claimed,
                computed,
                divergence: computed - c.claimed,
            });
        }
    }

    let best = extrapolated.unwrap_or(m_prime).max(m_prime);
    Ok(PredictionReport {
        k,
        delta,
        eps,
        m_base,
        m_prime_asymptotic: m_prime,
        m_prime_extrapolated: extrapolated,
        h_ansatz: h,
        conjecture_bound: bound,
        prime_floor: prime_floor(best),
        paper_claimed: claims,
    })
}
