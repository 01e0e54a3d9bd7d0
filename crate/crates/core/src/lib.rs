//! A numerical laboratory for multidimensional sieve ratios over
//! chaos-perturbed polytopes, with a high-performance prime-gap component.
//!
//! The pieces, bottom up:
//!
//! * [`primes`] — segmented bit-packed sieve and streaming gap statistics;
//! * [`tuples`] — admissible k-tuple checks and narrow-tuple search;
//! * [`chaos`] — logistic-map orbits and invariant-density diagnostics;
//! * [`geometry`] — the box-truncated simplex `R`, its chaotically relaxed
//!   enlargement `R'`, exact and Monte Carlo volumes;
//! * [`weights`] — symmetric polynomial test functions and the
//!   normal-CDF product weight;
//! * [`ratio`] — the sieve ratio `M(F) = I(F)/J(F)`, exact on the simplex
//!   and Monte Carlo on truncated or perturbed regions;
//! * [`optimizer`] — ratio maximization over a polynomial basis as a
//!   symmetric-definite generalized eigenvalue problem;
//! * [`predictor`] — closed-form heuristics tying the ratio to prime-gap
//!   length estimates;
//! * [`mod@reference`] — published comparison values for the reproduction
//!   harness.
//!
//! Every stochastic routine takes an explicit seed and produces results
//! that are independent of the worker-thread count (see [`sampling`]).

// Triangular and Gram index arithmetic reads better as range loops.
#![allow(clippy::needless_range_loop)]

pub mod chaos;
pub mod error;
pub mod geometry;
mod linalg;
pub mod optimizer;
pub mod predictor;
pub mod primes;
pub mod ratio;
pub mod reference;
pub mod sampling;
pub mod tuples;
pub mod weights;

pub use chaos::{logistic_iterate, logistic_step, orbit_statistics, LogisticParams, OrbitStats};
pub use error::{Error, Result};
pub use geometry::{
    check_volume_bound, exact_base_volume, in_base_region, in_perturbed_region, mc_volume,
    tau_from_delta, McVolume, PolytopeSpec, VolumeEstimate,
};
pub use optimizer::{
    build_gram_matrices, enumerate_basis, maximize_ratio, optimize_perturbed, BasisSpec,
    EigenResult, GramMode,
};
pub use predictor::{
    conjecture_bound, extrapolate_m, gap_ansatz, m_prime_asymptotic, min_k_for_level, predict,
    PredictionReport,
};
pub use primes::{enumerate_primes, gap_summary, top_gap_frequencies, PrimeGapSummary};
pub use ratio::{exact_ratio, mc_ratio, RatioMethod, RatioReport, Region};
pub use tuples::{is_admissible, narrowest_tuple, Tuple};
pub use weights::{
    eval_monomial_symmetric, normal_cdf, rmt_weight, Partition, PerturbedFunction,
    SymmetricPolynomial,
};
