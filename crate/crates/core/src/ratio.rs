//! The sieve ratio `M(F) = I(F) / J(F)` with
//! `I(F) = int F^2` and `J(F) = sum_j int F^2 / (1 - t_j)`.
//!
//! Two evaluation modes:
//!
//! * **exact-simplex** — `F^2` is expanded into monomials and integrated over
//!   the full untruncated simplex with two closed forms:
//!   `int prod t_i^(a_i) = prod(a_i!) / (k + A)!` and
//!   `int prod t_i^(a_i) / (1 - t_j) = prod(a_i!) / ((A - a_j + k - 1) * (A + k - 1)!)`
//!   where `A = sum a_i`. Both are evaluated in exact 128-bit integer
//!   arithmetic before a single floating division.
//! * **mc-base / mc-perturbed** — conditional-mean estimator on the
//!   box-truncated (and optionally chaos-perturbed) region: `I` and the `J_j`
//!   are means over in-region points, so region-volume factors cancel in the
//!   ratio.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PolytopeSpec;
use crate::sampling;
use crate::weights::{self, factorial_u128, PerturbedFunction, SymmetricPolynomial};

/// Exponent budget for the exact integrals: `k + total degree` must stay
/// within the 128-bit factorial table.
pub const MAX_FACTORIAL_ARG: u32 = 34;

/// Fewest in-region points accepted by the Monte Carlo estimator.
pub const MIN_REGION_HITS: u64 = 100;

/// `int_{sum t <= 1, t >= 0} prod t_i^(a_i) dt = prod(a_i!) / (k + A)!`.
///
/// Panics if `k + A` exceeds [`MAX_FACTORIAL_ARG`]; the public entry points
/// guard this with a capacity error first.
pub fn simplex_monomial_integral(exponents: &[u32]) -> f64 {
    let k = exponents.len() as u32;
    assert!(k >= 1, "integral needs k >= 1");
    let total: u32 = exponents.iter().sum();
    assert!(
        k + total <= MAX_FACTORIAL_ARG,
        "exponent budget exceeded: k + degree = {} > {MAX_FACTORIAL_ARG}",
        k + total
    );
    let mut numer = 1u128;
    for &a in exponents {
        numer *= factorial_u128(a);
    }
    numer as f64 / factorial_u128(k + total) as f64
}

/// `int_{simplex} prod t_i^(a_i) / (1 - t_j) dt` for `k >= 2`.
///
/// The `k = 1` integral diverges.
pub fn simplex_monomial_integral_with_pole(exponents: &[u32], j: usize) -> Result<f64> {
    let k = exponents.len();
    if k == 1 {
        return Err(Error::Divergence(
            "int t^a / (1 - t) over [0, 1] diverges; the pole integral needs k >= 2".into(),
        ));
    }
    if j >= k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: j + 1,
        });
    }
    let total: u32 = exponents.iter().sum();
    assert!(
        k as u32 + total <= MAX_FACTORIAL_ARG,
        "exponent budget exceeded: k + degree = {} > {MAX_FACTORIAL_ARG}",
        k as u32 + total
    );
    let mut numer = 1u128;
    for &a in exponents {
        numer *= factorial_u128(a);
    }
    let rest = total - exponents[j]; // A - a_j
    let denom = (rest + k as u32 - 1) as u128 * factorial_u128(total + k as u32 - 1);
    Ok(numer as f64 / denom as f64)
}

/// How a [`RatioReport`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RatioMethod {
    #[serde(rename = "exact-simplex")]
    ExactSimplex,
    #[serde(rename = "mc-base")]
    McBase,
    #[serde(rename = "mc-perturbed")]
    McPerturbed,
}

/// Sampling region for the Monte Carlo estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Base,
    Perturbed,
}

/// The assembled ratio `M = I / J` with its per-coordinate `J` components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    #[serde(rename = "I")]
    pub i_value: f64,
    #[serde(rename = "J_components")]
    pub j_components: Vec<f64>,
    #[serde(rename = "J")]
    pub j_value: f64,
    #[serde(rename = "M")]
    pub m_value: f64,
    pub method: RatioMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hits: Option<u64>,
    /// Jackknife standard error of `M` over sample blocks (MC only; absent
    /// when the run is too small to split into blocks).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    /// Largest integer strictly below `M`: the sieve's prime-count level.
    pub prime_floor: i64,
}

/// Largest integer strictly below `m`.
pub fn prime_floor(m: f64) -> i64 {
    let f = m.floor();
    if f == m {
        f as i64 - 1
    } else {
        f as i64
    }
}

/// Exact `M(F)` over the full simplex (the box cap is ignored in this mode).
pub fn exact_ratio(f: &SymmetricPolynomial) -> Result<RatioReport> {
    let k = f.k();
    if k < 2 {
        return Err(Error::Divergence(
            "J(F) diverges for k = 1; the exact ratio needs k >= 2".into(),
        ));
    }
    if f.is_zero() {
        return Err(Error::Degenerate("the zero polynomial has no ratio".into()));
    }
    if k as u32 + 2 * f.max_degree() > MAX_FACTORIAL_ARG {
        return Err(Error::Capacity(format!(
            "exact mode supports k + 2*degree <= {MAX_FACTORIAL_ARG}, got {}",
            k as u32 + 2 * f.max_degree()
        )));
    }

    let placed = compile_placements(f)?;
    let mut i_value = 0.0;
    let mut j_components = vec![0.0; k];
    let mut sum_exps = vec![0u32; k];
    for (ca, ea) in &placed {
        for (cb, eb) in &placed {
            let c = ca * cb;
            for i in 0..k {
                sum_exps[i] = ea[i] + eb[i];
            }
            i_value += c * simplex_monomial_integral(&sum_exps);
            for (j, comp) in j_components.iter_mut().enumerate() {
                *comp += c * simplex_monomial_integral_with_pole(&sum_exps, j)?;
            }
        }
    }
    let j_value: f64 = j_components.iter().sum();
    let m_value = i_value / j_value;
    Ok(RatioReport {
        i_value,
        j_components,
        j_value,
        m_value,
        method: RatioMethod::ExactSimplex,
        samples: None,
        seed: None,
        hits: None,
        std_error: None,
        prime_floor: prime_floor(m_value),
    })
}

/// Flattens a polynomial into `(coefficient, exponent vector)` placements.
pub(crate) fn compile_placements(f: &SymmetricPolynomial) -> Result<Vec<(f64, Vec<u32>)>> {
    let mut out = Vec::new();
    for (alpha, c) in f.terms() {
        for e in weights::placements(alpha, f.k())? {
            out.push((*c, e));
        }
    }
    Ok(out)
}

struct CompiledFunction {
    placements: Vec<(f64, Vec<u32>)>,
    eps: f64,
}

impl CompiledFunction {
    fn new(fp: &PerturbedFunction) -> Result<Self> {
        Ok(CompiledFunction {
            placements: compile_placements(&fp.base)?,
            eps: fp.eps,
        })
    }

    #[inline]
    fn eval(&self, t: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (c, e) in &self.placements {
            sum += c * weights::eval_exponents(e, t);
        }
        if self.eps != 0.0 {
            sum += self.eps * weights::rmt_weight(t);
        }
        sum
    }
}

#[derive(Clone)]
struct RatioBlock {
    hits: u64,
    s_i: f64,
    s_j: Vec<f64>,
}

/// Monte Carlo `M(F')` on the base or perturbed region.
///
/// Uniform points on `[0, tau]^k`; `I` is the mean of `F'(t)^2` and `J_j`
/// the mean of `F'(t)^2 / (1 - t_j)` over in-region points, so `M` reduces
/// to a ratio of in-region sums. Deterministic per seed and worker count.
pub fn mc_ratio(
    fp: &PerturbedFunction,
    spec: &PolytopeSpec,
    region: Region,
    samples: u64,
    seed: u64,
) -> Result<RatioReport> {
    if fp.base.k() != spec.k {
        return Err(Error::DimensionMismatch {
            expected: spec.k,
            got: fp.base.k(),
        });
    }
    if samples < 1_000 {
        return Err(Error::domain(format!(
            "ratio estimation needs samples >= 10^3, got {samples}"
        )));
    }
    let k = spec.k;
    let compiled = CompiledFunction::new(fp)?;

    let blocks = sampling::run_blocks(samples, seed, |rng, n| {
        let mut t = vec![0.0f64; k];
        let mut block = RatioBlock {
            hits: 0,
            s_i: 0.0,
            s_j: vec![0.0; k],
        };
        for _ in 0..n {
            let mut sum = 0.0;
            for slot in t.iter_mut() {
                *slot = rng.random::<f64>() * spec.tau;
                sum += *slot;
            }
            let inside = match region {
                Region::Base => sum <= 1.0,
                Region::Perturbed => sum <= spec.perturbed_bound(sum),
            };
            if inside {
                let v = compiled.eval(&t);
                let v2 = v * v;
                block.hits += 1;
                block.s_i += v2;
                for (j, sj) in block.s_j.iter_mut().enumerate() {
                    *sj += v2 / (1.0 - t[j]);
                }
            }
        }
        block
    });

    let hits: u64 = blocks.iter().map(|b| b.hits).sum();
    if hits < MIN_REGION_HITS {
        return Err(Error::InsufficientSamples(format!(
            "only {hits} in-region points (need >= {MIN_REGION_HITS}); increase samples"
        )));
    }
    let total_i: f64 = blocks.iter().map(|b| b.s_i).sum();
    let mut j_sums = vec![0.0; k];
    for b in &blocks {
        for (j, sj) in j_sums.iter_mut().enumerate() {
            *sj += b.s_j[j];
        }
    }
    let total_j: f64 = j_sums.iter().sum();
    if total_j <= 0.0 {
        return Err(Error::Degenerate(
            "J(F') vanished on the sampled region".into(),
        ));
    }

    let i_value = total_i / hits as f64;
    let j_components: Vec<f64> = j_sums.iter().map(|s| s / hits as f64).collect();
    let j_value: f64 = j_components.iter().sum();
    let m_value = total_i / total_j;

    // Delete-one-block jackknife for the standard error of M.
    let mut std_error = None;
    if blocks.len() >= 2 {
        let mut replicates = Vec::with_capacity(blocks.len());
        for b in &blocks {
            let jb: f64 = b.s_j.iter().sum();
            let denom = total_j - jb;
            if denom > 0.0 {
                replicates.push((total_i - b.s_i) / denom);
            }
        }
        if replicates.len() >= 2 {
            let nb = replicates.len() as f64;
            let mean = replicates.iter().sum::<f64>() / nb;
            let var: f64 = replicates
                .iter()
                .map(|m| (m - mean) * (m - mean))
                .sum::<f64>();
            std_error = Some(((nb - 1.0) / nb * var).sqrt());
        }
    }

    Ok(RatioReport {
        i_value,
        j_components,
        j_value,
        m_value,
        method: match region {
            Region::Base => RatioMethod::McBase,
            Region::Perturbed => RatioMethod::McPerturbed,
        },
        samples: Some(samples),
        seed: Some(seed),
        hits: Some(hits),
        std_error,
        prime_floor: prime_floor(m_value),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::LogisticParams;
    use crate::weights::Partition;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn spec(k: usize, tau: f64, delta: f64) -> PolytopeSpec {
        PolytopeSpec::new(k, tau, delta, LogisticParams::default()).unwrap()
    }

    #[test]
    fn monomial_integral_cases() {
        // Simplex volume in dimension 6.
        assert!((simplex_monomial_integral(&[0; 6]) - 1.0 / 720.0).abs() < 1e-18);
        // Direct double integrals.
        assert!((simplex_monomial_integral(&[1, 0]) - 1.0 / 6.0).abs() < 1e-17);
        assert!((simplex_monomial_integral(&[1, 1]) - 1.0 / 24.0).abs() < 1e-17);
    }

    #[test]
    fn pole_integral_cases() {
        // a = 0, k = 2: exactly 1, so J(1) = 2.
        assert!((simplex_monomial_integral_with_pole(&[0, 0], 0).unwrap() - 1.0).abs() < 1e-15);
        // a = 0, general k: 1 / ((k-1) * (k-1)!).
        for k in 2..=8usize {
            let want = 1.0 / ((k - 1) as f64 * factorial_u128(k as u32 - 1) as f64);
            let got = simplex_monomial_integral_with_pole(&vec![0; k], k - 1).unwrap();
            assert!((got - want).abs() < 1e-15 * want.max(1.0), "k = {k}");
        }
        // Divergent k = 1.
        assert!(matches!(
            simplex_monomial_integral_with_pole(&[2], 0),
            Err(Error::Divergence(_))
        ));
        assert!(simplex_monomial_integral_with_pole(&[0, 0], 5).is_err());
    }

    #[test]
    fn pole_integral_hand_checked() {
        // int t1/(1-t1) over the triangle = int_0^1 t1 dt1 = 1/2.
        assert!((simplex_monomial_integral_with_pole(&[1, 0], 0).unwrap() - 0.5).abs() < 1e-15);
        // int t2/(1-t1) over the triangle = 1/4.
        assert!((simplex_monomial_integral_with_pole(&[0, 1], 0).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn symmetric_poly_has_equal_j_components() {
        let f = SymmetricPolynomial::new(
            5,
            vec![
                (Partition::empty(), 0.4),
                (part(&[1]), 1.0),
                (part(&[2, 1]), -0.3),
            ],
        )
        .unwrap();
        let r = exact_ratio(&f).unwrap();
        for pair in r.j_components.windows(2) {
            let rel = (pair[0] - pair[1]).abs() / pair[0].abs();
            assert!(rel <= 1e-12, "J components differ: {:?}", r.j_components);
        }
        assert!((r.j_value - r.j_components.iter().sum::<f64>()).abs() < 1e-15);
    }

    #[test]
    fn pole_formula_against_simplex_sampling() {
        // Independent check of the closed form: uniform points on the
        // simplex via normalized exponentials, mean of t^a/(1-t_j) times
        // the simplex volume.
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..5 {
            let k = rng.random_range(2..=4usize);
            let exps: Vec<u32> = (0..k).map(|_| rng.random_range(0..=2)).collect();
            let j = rng.random_range(0..k);
            let n = 400_000;
            let mut sum = 0.0;
            let mut sum2 = 0.0;
            for _ in 0..n {
                let draws: Vec<f64> = (0..=k).map(|_| -rng.random::<f64>().ln()).collect();
                let total: f64 = draws.iter().sum();
                let t: Vec<f64> = draws[..k].iter().map(|d| d / total).collect();
                let v = weights::eval_exponents(&exps, &t) / (1.0 - t[j]);
                sum += v;
                sum2 += v * v;
            }
            let volume = 1.0 / factorial_u128(k as u32) as f64;
            let mean = sum / n as f64;
            let est = mean * volume;
            let se = ((sum2 / n as f64 - mean * mean) / n as f64).sqrt() * volume;
            let want = simplex_monomial_integral_with_pole(&exps, j).unwrap();
            assert!(
                (est - want).abs() <= 5.0 * se.max(1e-12),
                "exps {exps:?} j {j}: est {est} want {want} se {se}"
            );
        }
    }

    #[test]
    fn exact_ratio_constant() {
        // F = 1, k = 2: I = 1/2, J = 2, M = 1/4.
        let r = exact_ratio(&SymmetricPolynomial::constant(2, 1.0)).unwrap();
        assert!((r.i_value - 0.5).abs() < 1e-15);
        assert!((r.j_value - 2.0).abs() < 1e-14);
        assert!((r.m_value - 0.25).abs() < 1e-15);
        assert_eq!(r.prime_floor, 0);
        assert_eq!(r.method, RatioMethod::ExactSimplex);

        // General closed form M(1) = (k-1)/k^2; k = 6 gives 5/36.
        let r6 = exact_ratio(&SymmetricPolynomial::constant(6, 1.0)).unwrap();
        assert!((r6.m_value - 5.0 / 36.0).abs() < 1e-15);
        for pair in r6.j_components.windows(2) {
            assert!((pair[0] - pair[1]).abs() <= 1e-12 * pair[0].abs());
        }
    }

    #[test]
    fn exact_ratio_power_sum() {
        // F = m_(1) = t1 + t2: I = 2/4! * 2 + 2/4! = 1/4.
        let f = SymmetricPolynomial::new(2, vec![(part(&[1]), 1.0)]).unwrap();
        let r = exact_ratio(&f).unwrap();
        assert!((r.i_value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn exact_ratio_errors() {
        assert!(matches!(
            exact_ratio(&SymmetricPolynomial::constant(1, 1.0)),
            Err(Error::Divergence(_))
        ));
        assert!(matches!(
            exact_ratio(&SymmetricPolynomial::constant(4, 0.0)),
            Err(Error::Degenerate(_))
        ));
        // Exponent budget: k + 2d too large.
        let f = SymmetricPolynomial::new(24, vec![(part(&[6]), 1.0)]).unwrap();
        assert!(matches!(exact_ratio(&f), Err(Error::Capacity(_))));
    }

    #[test]
    fn scale_invariance() {
        let f = SymmetricPolynomial::new(
            4,
            vec![
                (Partition::empty(), 1.0),
                (part(&[2]), -0.5),
                (part(&[1, 1]), 0.25),
            ],
        )
        .unwrap();
        let m0 = exact_ratio(&f).unwrap().m_value;

        // Power-of-two scaling is exact in binary floating point.
        let doubled = SymmetricPolynomial::new(
            4,
            f.terms()
                .iter()
                .map(|(a, c)| (a.clone(), 2.0 * c))
                .collect(),
        )
        .unwrap();
        assert_eq!(exact_ratio(&doubled).unwrap().m_value, m0);

        let scaled = SymmetricPolynomial::new(
            4,
            f.terms()
                .iter()
                .map(|(a, c)| (a.clone(), -3.7 * c))
                .collect(),
        )
        .unwrap();
        assert!((exact_ratio(&scaled).unwrap().m_value - m0).abs() < 1e-12 * m0.abs());
    }

    #[test]
    fn mc_scale_invariance() {
        let s = spec(4, 0.45, 0.0);
        let f = SymmetricPolynomial::new(4, vec![(Partition::empty(), 1.0), (part(&[1]), 0.5)])
            .unwrap();
        let doubled = SymmetricPolynomial::new(
            4,
            f.terms()
                .iter()
                .map(|(a, c)| (a.clone(), 2.0 * c))
                .collect(),
        )
        .unwrap();
        let m0 = mc_ratio(
            &PerturbedFunction::new(f, 0.0).unwrap(),
            &s,
            Region::Base,
            20_000,
            3,
        )
        .unwrap()
        .m_value;
        let m1 = mc_ratio(
            &PerturbedFunction::new(doubled, 0.0).unwrap(),
            &s,
            Region::Base,
            20_000,
            3,
        )
        .unwrap()
        .m_value;
        assert_eq!(m0, m1);
    }

    #[test]
    fn mc_ratio_determinism() {
        let s = spec(6, 0.45, 0.9);
        let fp = PerturbedFunction::new(SymmetricPolynomial::constant(6, 1.0), 0.0).unwrap();
        let a = mc_ratio(&fp, &s, Region::Perturbed, 50_000, 42).unwrap();
        let b = mc_ratio(&fp, &s, Region::Perturbed, 50_000, 42).unwrap();
        assert_eq!(a, b);
        let c = mc_ratio(&fp, &s, Region::Perturbed, 50_000, 43).unwrap();
        assert_ne!(a.m_value, c.m_value);
    }

    #[test]
    fn mc_ratio_near_untruncated_simplex() {
        // tau -> 1 approximates the untruncated simplex; k = 4 keeps the
        // 1/(1-t_j) variance finite.
        let s = spec(4, 0.999, 0.0);
        let fp = PerturbedFunction::new(SymmetricPolynomial::constant(4, 1.0), 0.0).unwrap();
        let mc = mc_ratio(&fp, &s, Region::Base, 400_000, 11).unwrap();
        let exact = exact_ratio(&SymmetricPolynomial::constant(4, 1.0)).unwrap();
        let se = mc.std_error.unwrap();
        assert!(
            (mc.m_value - exact.m_value).abs() <= 3.0 * se,
            "mc {} exact {} se {se}",
            mc.m_value,
            exact.m_value
        );
    }

    #[test]
    fn mc_ratio_insufficient_hits() {
        // k = 8 at tau = 0.45: hit fraction ~1.4%, so 1000 samples land
        // well under the 100-hit floor.
        let s = spec(8, 0.45, 0.0);
        let fp = PerturbedFunction::new(SymmetricPolynomial::constant(8, 1.0), 0.0).unwrap();
        assert!(matches!(
            mc_ratio(&fp, &s, Region::Base, 1_000, 1),
            Err(Error::InsufficientSamples(_))
        ));
    }

    #[test]
    fn mc_ratio_preconditions() {
        let s = spec(6, 0.45, 0.9);
        let fp = PerturbedFunction::new(SymmetricPolynomial::constant(6, 1.0), 0.0).unwrap();
        assert!(matches!(
            mc_ratio(&fp, &s, Region::Base, 100, 1),
            Err(Error::Domain(_))
        ));
        let fp3 = PerturbedFunction::new(SymmetricPolynomial::constant(3, 1.0), 0.0).unwrap();
        assert!(matches!(
            mc_ratio(&fp3, &s, Region::Base, 10_000, 1),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn prime_floor_semantics() {
        assert_eq!(prime_floor(0.25), 0);
        assert_eq!(prime_floor(1.5), 1);
        assert_eq!(prime_floor(2.0), 1);
        assert_eq!(prime_floor(3.0001), 3);
    }

    #[test]
    fn report_json_keys() {
        let r = exact_ratio(&SymmetricPolynomial::constant(2, 1.0)).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        for key in ["I", "J_components", "J", "M", "method", "prime_floor"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["method"], "exact-simplex");
    }
}
