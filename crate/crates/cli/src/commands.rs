//! One function per subcommand: resolve parameters, run the library,
//! assemble the report body plus a plain-text rendering.

use serde_json::{json, Value};

use sievelab::chaos;
use sievelab::geometry::{self, PolytopeSpec};
use sievelab::optimizer::{self, GramMode};
use sievelab::predictor;
use sievelab::primes;
use sievelab::ratio::{self, Region};
use sievelab::reference;
use sievelab::tuples;
use sievelab::weights::{PerturbedFunction, SymmetricPolynomial};

use crate::CliError;

pub struct CommandOutput {
    pub body: Value,
    pub text: String,
    pub csv: Option<String>,
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn run_gaps(
    limit: u64,
    thresholds: &[u64],
    top: usize,
    segment_bytes: usize,
) -> Result<CommandOutput, CliError> {
    let summary = primes::gap_summary_with(limit, thresholds, top, segment_bytes)?;
    let histogram = primes::gap_histogram(limit, segment_bytes)?;
    let mut csv = Vec::new();
    primes::write_gap_csv(&mut csv, &histogram)
        .map_err(|e| CliError::Usage(format!("csv rendering failed: {e}")))?;

    let mut text = format!(
        "Primes below {}: {}\nMax gap: {}  Min gap: {}\n",
        summary.limit, summary.prime_count, summary.max_gap, summary.min_gap
    );
    for (t, f) in &summary.threshold_fractions {
        text.push_str(&format!("Gaps <= {t}: {:.2}%\n", f * 100.0));
    }
    text.push_str("Most common gaps (gap: count):\n");
    for (gap, count) in &summary.top_gaps {
        text.push_str(&format!("  {gap}: {count}\n"));
    }

    Ok(CommandOutput {
        body: to_value(&summary),
        text,
        csv: Some(String::from_utf8(csv).expect("csv is utf8")),
    })
}

pub fn run_tuple(k: usize, budget: u64) -> Result<CommandOutput, CliError> {
    if k == 0 {
        return Err(sievelab::Error::domain("tuple search needs k >= 1").into());
    }
    let tuple = tuples::narrowest_tuple(k, budget);
    let body = json!({
        "k": k,
        "budget": budget,
        "offsets": tuple.offsets(),
        "diameter": tuple.diameter(),
        "admissible": tuples::is_admissible(&tuple),
    });
    let text = format!(
        "k = {k}: {} with diameter {} (budget {budget})\n",
        tuple,
        tuple.diameter()
    );
    Ok(CommandOutput {
        body,
        text,
        csv: None,
    })
}

pub fn run_chaos(
    r: f64,
    y0: f64,
    n: u64,
    burn_in: u64,
    bins: usize,
) -> Result<CommandOutput, CliError> {
    let stats = chaos::orbit_statistics(y0, r, n, burn_in, bins)?;
    let arcsine_distance = if n >= 10_000 {
        Some(chaos::invariant_density_distance(r, n, bins)?)
    } else {
        None
    };
    let body = json!({
        "r": r,
        "y0": y0,
        "n": n,
        "burn_in": burn_in,
        "bins": bins,
        "stats": to_value(&stats),
        "arcsine_distance": arcsine_distance,
    });
    let mut text = format!(
        "Orbit of y0 = {y0} under r = {r} ({} iterates after burn-in {burn_in}):\n\
         mean {:.6}  min {:.6}  max {:.6}  eta margin {:.6}{}\n",
        n - burn_in,
        stats.mean,
        stats.min,
        stats.max,
        stats.eta_margin,
        if stats.degenerate {
            "  [degenerate: orbit reached 0]"
        } else {
            ""
        }
    );
    if let Some(d) = arcsine_distance {
        text.push_str(&format!("sup-distance to arcsine bin masses: {d:.6}\n"));
    }
    Ok(CommandOutput {
        body,
        text,
        csv: None,
    })
}

pub fn run_volume(
    spec: &PolytopeSpec,
    samples: u64,
    seed: u64,
    exact: bool,
) -> Result<CommandOutput, CliError> {
    if exact {
        let v = geometry::exact_base_volume(spec.k, spec.tau);
        let body = json!({
            "k": spec.k,
            "tau": spec.tau,
            "method": "exact",
            "box_fraction": v.box_fraction,
            "absolute_volume": v.absolute_volume,
        });
        let text = format!(
            "Exact |R| for k = {}, tau = {}: {:.6} of the box ({:.6e} absolute)\n",
            spec.k, spec.tau, v.box_fraction, v.absolute_volume
        );
        return Ok(CommandOutput {
            body,
            text,
            csv: None,
        });
    }
    let mc = geometry::mc_volume(spec, samples, seed)?;
    let report = geometry::volume_report(spec, samples, seed, &mc);
    let text = format!(
        "k = {}, tau = {}, delta = {}, logistic iters = {}\nSamples: {}\n\
         Volume(R)  approx {:.6}  ({} points)\nVolume(R') approx {:.6}  ({} points)\n\
         Volume ratio |R'|/|R| approx {:.4}\n",
        spec.k,
        spec.tau,
        spec.delta,
        spec.logistic.iterations,
        samples,
        mc.base.box_fraction,
        mc.base.hit_count,
        mc.perturbed.box_fraction,
        mc.perturbed.hit_count,
        mc.ratio
    );
    Ok(CommandOutput {
        body: to_value(&report),
        text,
        csv: None,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn run_ratio(
    spec: &PolytopeSpec,
    eps: f64,
    samples: u64,
    seed: u64,
    region: Region,
    exact: bool,
    poly: Option<SymmetricPolynomial>,
) -> Result<CommandOutput, CliError> {
    let base = poly.unwrap_or_else(|| SymmetricPolynomial::constant(spec.k, 1.0));
    let report = if exact {
        ratio::exact_ratio(&base)?
    } else {
        let fp = PerturbedFunction::new(base, eps)?;
        ratio::mc_ratio(&fp, spec, region, samples, seed)?
    };
    let body = json!({
        "k": spec.k,
        "tau": spec.tau,
        "delta": spec.delta,
        "eps": eps,
        "region": to_value(&region),
        "report": to_value(&report),
    });
    let text = format!(
        "M = {:.6} (I = {:.6e}, J = {:.6e}, method {:?}{})\nprime floor m = {}\n",
        report.m_value,
        report.i_value,
        report.j_value,
        report.method,
        report
            .std_error
            .map(|s| format!(", std err {s:.2e}"))
            .unwrap_or_default(),
        report.prime_floor
    );
    Ok(CommandOutput {
        body,
        text,
        csv: None,
    })
}

pub struct OptimizeParams<'a> {
    pub k: usize,
    pub d: u32,
    pub mode: &'a str,
    pub spec: &'a PolytopeSpec,
    pub eps: f64,
    pub samples: u64,
    pub seed: u64,
}

pub fn run_optimize(p: &OptimizeParams) -> Result<CommandOutput, CliError> {
    let basis = optimizer::enumerate_basis(p.k, p.d);
    let result = match p.mode {
        "exact" => optimizer::maximize_ratio(&basis, GramMode::ExactSimplex)?,
        "mc" => optimizer::optimize_perturbed(&basis, p.spec, p.eps, p.samples, p.seed)?,
        other => {
            return Err(CliError::Usage(format!(
                "unknown optimize mode `{other}` (expected exact or mc)"
            )))
        }
    };
    let polynomial = result.polynomial(&basis)?;
    let body = json!({
        "k": p.k,
        "d": p.d,
        "m_opt": result.m_opt,
        "residual": result.residual,
        "mode": p.mode,
        "std_error": result.std_error,
        "constrained_m": result.constrained_m,
        "includes_rmt_weight": result.includes_rmt_weight,
        "coefficients": result.coefficients,
        "basis": basis.partitions.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "polynomial": polynomial.to_text(),
        "seed": if p.mode == "mc" { Some(p.seed) } else { None },
        "samples": if p.mode == "mc" { Some(p.samples) } else { None },
    });
    let text = format!(
        "m_opt = {:.8} over basis (k = {}, d = {}, {} elements), residual {:.2e}\n{}",
        result.m_opt,
        p.k,
        p.d,
        basis.partitions.len(),
        result.residual,
        polynomial.to_text()
    );
    Ok(CommandOutput {
        body,
        text,
        csv: None,
    })
}

pub fn run_predict(
    k: u64,
    delta: f64,
    eps: f64,
    m_base: Option<f64>,
    baseline: Option<Vec<(u64, f64)>>,
    level: Option<u64>,
) -> Result<CommandOutput, CliError> {
    let report = predictor::predict(k, delta, eps, m_base)?;
    let min_k = match (&baseline, level) {
        (Some(table), Some(m)) => Some(json!({
            "level": m,
            "baseline": table,
            "min_k": predictor::min_k_for_level(m, table, delta, eps)?,
        })),
        _ => None,
    };
    let body = json!({
        "report": to_value(&report),
        "min_k_for_level": min_k,
    });
    let mut text = format!(
        "k = {k}, delta = {delta}, eps = {eps}:\n  M' asymptotic     = {:.4}\n  H ansatz          = {:.2}\n",
        report.m_prime_asymptotic, report.h_ansatz
    );
    if let Some(me) = report.m_prime_extrapolated {
        text.push_str(&format!("  M' extrapolated   = {me:.4}\n"));
    }
    if let Some(cb) = report.conjecture_bound {
        text.push_str(&format!("  conjecture bound  = {cb:.2}\n"));
    }
    text.push_str(&format!("  prime floor m     = {}\n", report.prime_floor));
    for claim in &report.paper_claimed {
        text.push_str(&format!(
            "  quoted {}: {} vs computed {:.4} (divergence {:+.4})\n",
            claim.quantity, claim.claimed, claim.computed, claim.divergence
        ));
    }
    Ok(CommandOutput {
        body,
        text,
        csv: None,
    })
}

/// Runs the two toy experiments plus a scaled prime-gap run and reports
/// quoted values, computed values, and deviations side by side.
pub fn run_reproduce(
    spec: &PolytopeSpec,
    samples: u64,
    seed: u64,
    gap_limit: u64,
) -> Result<CommandOutput, CliError> {
    let parameters = json!({
        "k": spec.k,
        "tau": spec.tau,
        "delta": spec.delta,
        "eps": reference::DEFAULT_EPS,
        "r": spec.logistic.r,
        "iterations": spec.logistic.iterations,
        "samples": samples,
        "seed": seed,
        "gap_limit": gap_limit,
    });

    // Ratio experiment: same seed for both regions, so both runs see the
    // same points and the relative change is measured on coupled draws.
    let ratio_section = (|| -> Result<Value, sievelab::Error> {
        let fp = PerturbedFunction::new(
            SymmetricPolynomial::constant(spec.k, 1.0),
            reference::DEFAULT_EPS,
        )?;
        let base = ratio::mc_ratio(&fp, spec, Region::Base, samples, seed)?;
        let perturbed = ratio::mc_ratio(&fp, spec, Region::Perturbed, samples, seed)?;
        let rel_change_pct = (perturbed.m_value / base.m_value - 1.0) * 100.0;
        let dev_base = base.m_value - reference::RATIO_M_BASE;
        let dev_change = rel_change_pct - reference::RATIO_RELATIVE_CHANGE_PCT;
        Ok(json!({
            "status": "ok",
            "paper": {
                "m_base": reference::RATIO_M_BASE,
                "m_perturbed": reference::RATIO_M_PERTURBED,
                "relative_change_pct": reference::RATIO_RELATIVE_CHANGE_PCT,
            },
            "computed": {
                "m_base": base.m_value,
                "m_perturbed": perturbed.m_value,
                "relative_change_pct": rel_change_pct,
                "hits_base": base.hits,
                "hits_perturbed": perturbed.hits,
                "std_error_base": base.std_error,
            },
            "deviation": {
                "m_base": dev_base,
                "relative_change_pct": dev_change,
            },
            "discrepancy": dev_base.abs() > 0.002 || dev_change.abs() > 0.5,
        }))
    })()
    .unwrap_or_else(error_section);

    // Volume experiment, with the exact inclusion-exclusion value alongside.
    let volume_section = (|| -> Result<Value, sievelab::Error> {
        let mc = geometry::mc_volume(spec, samples, seed)?;
        let exact = geometry::exact_base_volume(spec.k, spec.tau);
        let bound = geometry::check_volume_bound(spec, 0.0, samples, seed)?;
        let dev_ratio = mc.ratio - reference::VOLUME_RATIO;
        Ok(json!({
            "status": "ok",
            "paper": {
                "vol_R": reference::VOLUME_BASE_FRACTION,
                "vol_Rp": reference::VOLUME_PERTURBED_FRACTION,
                "ratio": reference::VOLUME_RATIO,
            },
            "computed": {
                "vol_R": mc.base.box_fraction,
                "vol_Rp": mc.perturbed.box_fraction,
                "ratio": mc.ratio,
                "exact_vol_R": exact.box_fraction,
                "volume_bound_holds": bound.passes,
            },
            "deviation": {
                "vol_R": mc.base.box_fraction - reference::VOLUME_BASE_FRACTION,
                "ratio": dev_ratio,
            },
            "discrepancy": dev_ratio.abs() > 0.1,
        }))
    })()
    .unwrap_or_else(error_section);

    // Prime-gap experiment. The quoted 1e8 statistics do not match direct
    // computation (max gap below 1e8 is 220, not 114), so the discrepancy
    // flag is set from the frozen computed value whatever the configured
    // limit; a run at the quoted limit re-derives it live.
    let gap_section = (|| -> Result<Value, sievelab::Error> {
        let summary = primes::gap_summary(gap_limit, &reference::GAP_THRESHOLDS)?;
        let comparable = gap_limit == reference::GAP_LIMIT;
        let frac_le_8_pct = summary
            .threshold_fractions
            .iter()
            .find(|(t, _)| *t == 8)
            .map(|(_, f)| f * 100.0);
        let deviation = if comparable {
            json!({
                "max_gap": summary.max_gap as i64 - reference::GAP_MAX as i64,
                "fraction_le_8_pct": frac_le_8_pct.map(|f| f - reference::GAP_FRACTION_LE_8_PCT),
            })
        } else {
            Value::Null
        };
        Ok(json!({
            "status": "ok",
            "paper": {
                "limit": reference::GAP_LIMIT,
                "max_gap": reference::GAP_MAX,
                "min_gap": reference::GAP_MIN,
                "fraction_le_8_pct": reference::GAP_FRACTION_LE_8_PCT,
                "top_gaps": reference::GAP_TOP10,
                "reproducible": reference::GAP_REPRODUCIBLE,
            },
            "computed": to_value(&summary),
            "computed_max_gap_at_paper_limit": reference::GAP_MAX_COMPUTED,
            "comparable": comparable,
            "deviation": deviation,
            "discrepancy": reference::GAP_MAX_COMPUTED != reference::GAP_MAX,
        }))
    })()
    .unwrap_or_else(error_section);

    let body = json!({
        "parameters": parameters,
        "ratio_experiment": ratio_section,
        "volume_experiment": volume_section,
        "gap_experiment": gap_section,
    });

    let text = render_reproduce_text(&body);
    Ok(CommandOutput {
        body,
        text,
        csv: None,
    })
}

fn error_section(e: sievelab::Error) -> Value {
    json!({ "status": "error", "message": e.to_string() })
}

fn render_reproduce_text(body: &Value) -> String {
    let mut text = String::from("Reproduction run\n================\n");
    for (label, key) in [
        ("Ratio experiment", "ratio_experiment"),
        ("Volume experiment", "volume_experiment"),
        ("Prime-gap experiment", "gap_experiment"),
    ] {
        let section = &body[key];
        text.push_str(&format!("{label}: status {}", section["status"]));
        if section["status"] == "ok" {
            text.push_str(&format!(", discrepancy {}", section["discrepancy"]));
        } else {
            text.push_str(&format!(", {}", section["message"]));
        }
        text.push('\n');
    }
    text
}
