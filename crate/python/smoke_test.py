#!/usr/bin/env python3
"""Smoke test for the sievelab_py extension module.

Builds are not triggered here; compile the module first:

    cargo build -p sievelab-py --release

The script locates the cdylib under target/, copies it next to a temp dir
as `sievelab_py.so`, imports it, and exercises each exposed operation once
against known values.
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO_ROOT / "target" / "release" / "libsievelab_py.so",
        REPO_ROOT / "target" / "debug" / "libsievelab_py.so",
        REPO_ROOT / "target" / "release" / "libsievelab_py.dylib",
        REPO_ROOT / "target" / "debug" / "libsievelab_py.dylib",
    ]
    built = next((p for p in candidates if p.exists()), None)
    if built is None:
        sys.exit(
            "sievelab_py is not built; run `cargo build -p sievelab-py --release` first"
        )
    stage = Path(tempfile.mkdtemp(prefix="sievelab-py-"))
    shutil.copy2(built, stage / "sievelab_py.so")
    sys.path.insert(0, str(stage))
    import sievelab_py  # noqa: E402

    return sievelab_py


def approx(a, b, tol=1e-9):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    lab = load_module()

    # primes
    assert lab.enumerate_primes(10) == [2, 3, 5, 7]
    assert lab.enumerate_primes(2) == []
    summary = lab.gap_summary(100, [8])
    assert summary["prime_count"] == 25
    assert summary["max_gap"] == 8
    assert summary["threshold_fractions"] == [[8, 1.0]]
    assert lab.top_gap_frequencies(100, 3) == [(2, 8), (4, 7), (6, 7)]

    # tuples
    assert lab.is_admissible([0, 2, 6, 8, 12])
    assert not lab.is_admissible([0, 2, 4])
    assert lab.tuple_diameter([0, 2, 6, 8]) == 8
    narrow = lab.narrowest_tuple(5)
    assert lab.is_admissible(narrow) and narrow[-1] - narrow[0] <= 12

    # chaos
    approx(lab.logistic_step(0.5, 3.9), 0.975, 1e-15)
    approx(lab.logistic_iterate(0.5, iterations=2), 0.0950625, 1e-12)
    orbit = lab.orbit_statistics(0.123456789, 4.0, 200_000, 1_000, 10)
    approx(orbit["mean"], 0.5, 0.02)
    assert lab.invariant_density_distance(4.0, 1_000_000, 10) <= 0.01

    # geometry
    approx(lab.tau_from_delta(0.3), 0.2, 1e-15)
    exact = lab.exact_base_volume(6, 0.45)
    approx(exact["box_fraction"], 0.13948343068918072, 1e-12)
    spec = lab.PolytopeSpec(6, 0.45, 0.9)
    assert lab.in_base_region([0.1] * 6, spec)
    assert lab.in_perturbed_region([0.18] * 6, spec)
    assert not lab.in_base_region([0.18] * 6, spec)
    mc = lab.mc_volume(spec, samples=200_000, seed=42)
    approx(mc["ratio"], 4.246, 0.15)
    assert lab.check_volume_bound(spec, eps=0.0, samples=50_000, seed=42)["passes"]

    # deterministic across repeat calls
    assert lab.mc_volume(spec, samples=50_000, seed=7) == lab.mc_volume(
        spec, samples=50_000, seed=7
    )

    # weights
    approx(lab.normal_cdf(0.0), 0.5, 1e-15)
    approx(lab.normal_cdf(1.0), 0.8413447460685429, 1e-13)
    approx(lab.rmt_weight([0.0] * 6), 0.5**6, 1e-15)
    approx(lab.eval_monomial_symmetric([2, 1], [1.0, 2.0, 3.0]), 48.0, 1e-12)

    # ratio
    one = lab.SymmetricPolynomial.constant(6, 1.0)
    exact_ratio = lab.exact_ratio(one)
    approx(exact_ratio["M"], 5.0 / 36.0, 1e-14)
    two_k = lab.SymmetricPolynomial.constant(2, 1.0)
    approx(lab.exact_ratio(two_k)["M"], 0.25, 1e-15)
    mc_ratio = lab.mc_ratio(one, spec, region="base", samples=100_000, seed=42)
    approx(mc_ratio["M"], 0.1406, 0.003)
    assert mc_ratio["method"] == "mc-base"

    # polynomial text round-trip
    poly = lab.SymmetricPolynomial(3, [([], 1.5), ([2, 1], -0.25)])
    parsed = lab.SymmetricPolynomial.from_text(3, poly.to_text())
    assert parsed.terms() == poly.terms()
    approx(poly.eval([1.0, 2.0, 3.0]), 1.5 - 0.25 * 48.0, 1e-12)

    # optimizer
    assert lab.enumerate_basis(2, 2) == [[], [1], [1, 1], [2]]
    opt = lab.maximize_ratio(6, 2)
    assert opt["m_opt"] >= 5.0 / 36.0 - 1e-12
    assert opt["residual"] <= 1e-10
    perturbed = lab.optimize_perturbed(spec, d=1, eps=0.1, samples=60_000, seed=9)
    assert perturbed["includes_rmt_weight"]
    assert perturbed["m_opt"] > 0.0

    # predictor
    approx(lab.m_prime_asymptotic(30, 0.3, 0.1), 1.1227120994856868, 1e-12)
    approx(lab.extrapolate_m(2.5, 40, 0.3, 0.1), 2.7805322740963216, 1e-12)
    approx(lab.gap_ansatz(28, 0.3, 0.1), 56.59035759591143, 1e-9)
    approx(lab.conjecture_bound(0.3, 0.1), 10.991475138000937, 1e-12)
    assert lab.min_k_for_level(2, [(30, 2.0), (40, 2.5)], 0.3, 0.1) == 30
    assert lab.min_k_for_level(3, [(30, 2.0), (40, 2.5)], 0.3, 0.1) is None
    report = lab.predict(40, 0.3, 0.1, m_base=2.5)
    claims = {c["quantity"]: c for c in report["paper_claimed"]}
    assert claims["m_prime_extrapolated"]["claimed"] == 3.0
    assert claims["m_prime_extrapolated"]["divergence"] < -0.2

    # error mapping
    try:
        lab.enumerate_primes(10**13)
    except OverflowError:
        pass
    else:
        raise AssertionError("capacity error should raise OverflowError")
    try:
        lab.logistic_step(1.5, 3.9)
    except ValueError:
        pass
    else:
        raise AssertionError("domain error should raise ValueError")

    print("sievelab_py smoke test: all checks passed")


if __name__ == "__main__":
    main()
