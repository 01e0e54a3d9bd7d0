//! Test functions for the sieve ratio: monomial symmetric polynomials, the
//! random-matrix weight `xi(t) = prod_j Phi(t_j)`, and the perturbed
//! combination `F'(t) = F(t) + eps * xi(t)`.
//!
//! Polynomials are stored sparsely as `(partition, coefficient)` pairs over
//! the monomial symmetric basis. Evaluation enumerates the distinct
//! placements of each partition's exponent vector, which is cheap for the
//! intended degree range (d <= 6).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer partition: the exponent multiset of one monomial symmetric
/// polynomial. Parts are positive and stored non-increasing; the empty
/// partition is the constant monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from parts in any order; zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::domain("partition parts must be positive"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Total degree: sum of parts.
    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Exponent vector padded with zeros to length `k`, largest first.
    pub fn exponents(&self, k: usize) -> Result<Vec<u32>> {
        if self.parts.len() > k {
            return Err(Error::domain(format!(
                "partition has {} parts, more than the {k} coordinates",
                self.parts.len()
            )));
        }
        let mut e = self.parts.clone();
        e.resize(k, 0);
        Ok(e)
    }

    /// Number of distinct placements of the exponent vector in `k`
    /// coordinates: `k! / prod(multiplicities!)`, zero pads included.
    pub fn orbit_size(&self, k: usize) -> Result<u128> {
        let exps = self.exponents(k)?;
        let mut numer = factorial_u128(k as u32);
        let mut run = 1u32;
        for i in 1..=exps.len() {
            if i < exps.len() && exps[i] == exps[i - 1] {
                run += 1;
            } else {
                numer /= factorial_u128(run);
                run = 1;
            }
        }
        Ok(numer)
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

pub(crate) fn factorial_u128(n: u32) -> u128 {
    assert!(n <= 34, "factorial_u128 overflows above 34!");
    (1..=n as u128).product()
}

/// All distinct placements of the partition's exponents in `k` coordinates.
pub fn placements(alpha: &Partition, k: usize) -> Result<Vec<Vec<u32>>> {
    let mut e = alpha.exponents(k)?;
    e.sort_unstable(); // start from the lexicographically smallest
    let mut out = Vec::new();
    loop {
        out.push(e.clone());
        if !next_permutation(&mut e) {
            break;
        }
    }
    Ok(out)
}

/// In-place lexicographic successor; false when `a` was the last one.
fn next_permutation(a: &mut [u32]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Evaluates the monomial symmetric polynomial `m_alpha` at `t`: the sum of
/// `prod t_i^(a_i)` over all distinct permutations of the exponent vector.
pub fn eval_monomial_symmetric(alpha: &Partition, t: &[f64]) -> Result<f64> {
    let placed = placements(alpha, t.len())?;
    Ok(placed.iter().map(|e| eval_exponents(e, t)).sum())
}

#[inline]
pub(crate) fn eval_exponents(exps: &[u32], t: &[f64]) -> f64 {
    let mut prod = 1.0;
    for (e, x) in exps.iter().zip(t) {
        if *e > 0 {
            prod *= x.powi(*e as i32);
        }
    }
    prod
}

/// A sparse symmetric polynomial over the monomial symmetric basis in `k`
/// variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricPolynomial {
    k: usize,
    terms: Vec<(Partition, f64)>,
}

impl SymmetricPolynomial {
    pub fn new(k: usize, terms: Vec<(Partition, f64)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("polynomial needs k >= 1 variables"));
        }
        for (alpha, _) in &terms {
            if alpha.len() > k {
                return Err(Error::domain(format!(
                    "partition ({alpha}) has more than k = {k} parts"
                )));
            }
        }
        for i in 1..terms.len() {
            if terms[..i].iter().any(|(a, _)| a == &terms[i].0) {
                return Err(Error::domain(format!(
                    "duplicate partition ({}) in polynomial",
                    terms[i].0
                )));
            }
        }
        Ok(SymmetricPolynomial { k, terms })
    }

    /// The constant polynomial `c` in `k` variables.
    pub fn constant(k: usize, c: f64) -> Self {
        SymmetricPolynomial {
            k,
            terms: vec![(Partition::empty(), c)],
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[(Partition, f64)] {
        &self.terms
    }

    pub fn max_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(a, _)| a.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|&(_, c)| c == 0.0)
    }

    /// `sum_alpha c_alpha * m_alpha(t)`.
    pub fn eval(&self, t: &[f64]) -> Result<f64> {
        if t.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                got: t.len(),
            });
        }
        let mut sum = 0.0;
        for (alpha, c) in &self.terms {
            sum += c * eval_monomial_symmetric(alpha, t)?;
        }
        Ok(sum)
    }

    /// Text form: one `coefficient: a1,a2,...` line per term, `#` comments.
    /// The empty partition serializes as a bare `coefficient:` line.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# symmetric polynomial: coefficient: partition parts\n");
        out.push_str(&format!("# k = {}\n", self.k));
        for (alpha, c) in &self.terms {
            if alpha.is_empty() {
                out.push_str(&format!("{c}:\n"));
            } else {
                out.push_str(&format!("{c}: {alpha}\n"));
            }
        }
        out
    }

    /// Parses the [`Self::to_text`] format.
    pub fn from_text(k: usize, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (coeff_str, parts_str) = line.split_once(':').ok_or_else(|| {
                Error::Parse(format!(
                    "line {}: expected `coefficient: parts`",
                    lineno + 1
                ))
            })?;
            let coeff: f64 = coeff_str
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("line {}: bad coefficient: {e}", lineno + 1)))?;
            let parts_str = parts_str.trim();
            let parts: Vec<u32> = if parts_str.is_empty() {
                Vec::new()
            } else {
                parts_str
                    .split(',')
                    .map(|p| {
                        p.trim().parse().map_err(|e| {
                            Error::Parse(format!("line {}: bad part: {e}", lineno + 1))
                        })
                    })
                    .collect::<Result<_>>()?
            };
            terms.push((Partition::new(parts)?, coeff));
        }
        SymmetricPolynomial::new(k, terms)
    }
}

/// Standard normal CDF, absolute error below 1e-13.
///
/// Computed as `erfc(-u/sqrt(2))/2` with a Maclaurin series for small
/// arguments and a Lentz continued fraction in the tail; both forms sit in
/// hot Monte Carlo loops, so no quadrature is involved.
pub fn normal_cdf(u: f64) -> f64 {
    0.5 * erfc(-u * std::f64::consts::FRAC_1_SQRT_2)
}

fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// `erf(x) = 2/sqrt(pi) * sum (-1)^n x^(2n+1) / (n! (2n+1))`, for `|x| < 2`.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // x^(2n+1) / n!
    let mut sum = x;
    for n in 1..200 {
        term *= -x2 / n as f64;
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / std::f64::consts::PI.sqrt()
}

/// `erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))`
/// evaluated by the modified Lentz algorithm, for `x >= 2`.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    for j in 1..300 {
        let a = if j == 1 { 1.0 } else { (j - 1) as f64 / 2.0 };
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    (-x * x).exp() * f / std::f64::consts::PI.sqrt()
}

/// The random-matrix weight `xi(t) = prod_j Phi(t_j)`, in (0, 1) for finite
/// inputs. This is the only weight variant; it occupies a named slot so a
/// different spacing model could replace it.
pub fn rmt_weight(t: &[f64]) -> f64 {
    t.iter().map(|&x| normal_cdf(x)).product()
}

/// `F'(t) = F(t) + eps * xi(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbedFunction {
    pub base: SymmetricPolynomial,
    pub eps: f64,
}

impl PerturbedFunction {
    pub fn new(base: SymmetricPolynomial, eps: f64) -> Result<Self> {
        if eps.is_nan() || eps < 0.0 {
            return Err(Error::domain(format!("eps must be >= 0, got {eps}")));
        }
        Ok(PerturbedFunction { base, eps })
    }

    pub fn eval(&self, t: &[f64]) -> Result<f64> {
        let base = self.base.eval(t)?;
        if self.eps == 0.0 {
            Ok(base)
        } else {
            Ok(base + self.eps * rmt_weight(t))
        }
    }
}
