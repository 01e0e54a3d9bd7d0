//! Python extension module exposing the main sievelab types and operations.
//!
//! Build with `cargo build -p sievelab-py --release`; the resulting
//! `libsievelab_py.so` imports as `sievelab_py` once renamed (see
//! `python/smoke_test.py`). Report-style results come back as plain dicts
//! mirroring the JSON the CLI emits.

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyFloat, PyList, PyString};

use sievelab::chaos;
use sievelab::geometry;
use sievelab::optimizer::{self, GramMode};
use sievelab::predictor;
use sievelab::primes;
use sievelab::ratio;
use sievelab::tuples;
use sievelab::weights;
use sievelab::LogisticParams;

fn err(e: sievelab::Error) -> PyErr {
    match e {
        sievelab::Error::Capacity(_) => PyOverflowError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// serde_json::Value -> Python object, for the report types.
fn value_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    use serde_json::Value;
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                i.into_pyobject(py)?.into_any()
            } else if let Some(u) = n.as_u64() {
                u.into_pyobject(py)?.into_any()
            } else {
                PyFloat::new(py, n.as_f64().unwrap_or(f64::NAN)).into_any()
            }
        }
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(value_to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (key, item) in map {
                dict.set_item(key, value_to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report_to_py<'py, T: serde::Serialize>(
    py: Python<'py>,
    report: &T,
) -> PyResult<Bound<'py, PyAny>> {
    let value = serde_json::to_value(report)
        .map_err(|e| PyValueError::new_err(format!("report serialization failed: {e}")))?;
    value_to_py(py, &value)
}

/// Region parameters for the base polytope R and its perturbed enlargement.
#[pyclass(name = "PolytopeSpec", skip_from_py_object)]
#[derive(Clone)]
struct PyPolytopeSpec {
    inner: geometry::PolytopeSpec,
}

#[pymethods]
impl PyPolytopeSpec {
    #[new]
    #[pyo3(signature = (k, tau, delta, r=3.9, iterations=5))]
    fn new(k: usize, tau: f64, delta: f64, r: f64, iterations: u32) -> PyResult<Self> {
        let logistic = LogisticParams::new(r, iterations).map_err(err)?;
        Ok(PyPolytopeSpec {
            inner: geometry::PolytopeSpec::new(k, tau, delta, logistic).map_err(err)?,
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.inner.tau
    }

    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    #[getter]
    fn r(&self) -> f64 {
        self.inner.logistic.r
    }

    #[getter]
    fn iterations(&self) -> u32 {
        self.inner.logistic.iterations
    }

    fn __repr__(&self) -> String {
        format!(
            "PolytopeSpec(k={}, tau={}, delta={}, r={}, iterations={})",
            self.inner.k,
            self.inner.tau,
            self.inner.delta,
            self.inner.logistic.r,
            self.inner.logistic.iterations
        )
    }
}

/// Sparse symmetric polynomial over the monomial symmetric basis.
#[pyclass(name = "SymmetricPolynomial", skip_from_py_object)]
#[derive(Clone)]
struct PySymmetricPolynomial {
    inner: weights::SymmetricPolynomial,
}

#[pymethods]
impl PySymmetricPolynomial {
    /// Terms are `(partition parts, coefficient)` pairs.
    #[new]
    fn new(k: usize, terms: Vec<(Vec<u32>, f64)>) -> PyResult<Self> {
        let terms = terms
            .into_iter()
            .map(|(parts, c)| Ok((weights::Partition::new(parts).map_err(err)?, c)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(PySymmetricPolynomial {
            inner: weights::SymmetricPolynomial::new(k, terms).map_err(err)?,
        })
    }

    #[staticmethod]
    fn constant(k: usize, c: f64) -> PyResult<Self> {
        if k == 0 {
            return Err(PyValueError::new_err("k must be >= 1"));
        }
        Ok(PySymmetricPolynomial {
            inner: weights::SymmetricPolynomial::constant(k, c),
        })
    }

    #[staticmethod]
    fn from_text(k: usize, text: &str) -> PyResult<Self> {
        Ok(PySymmetricPolynomial {
            inner: weights::SymmetricPolynomial::from_text(k, text).map_err(err)?,
        })
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn eval(&self, t: Vec<f64>) -> PyResult<f64> {
        self.inner.eval(&t).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn terms(&self) -> Vec<(Vec<u32>, f64)> {
        self.inner
            .terms()
            .iter()
            .map(|(a, c)| (a.parts().to_vec(), *c))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "SymmetricPolynomial(k={}, terms={})",
            self.inner.k(),
            self.inner.terms().len()
        )
    }
}

// ---- primes ----

#[pyfunction]
fn enumerate_primes(limit: u64) -> PyResult<Vec<u64>> {
    primes::enumerate_primes(limit).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (limit, thresholds=None))]
fn gap_summary<'py>(
    py: Python<'py>,
    limit: u64,
    thresholds: Option<Vec<u64>>,
) -> PyResult<Bound<'py, PyAny>> {
    let thresholds = thresholds.unwrap_or_else(|| sievelab::reference::GAP_THRESHOLDS.to_vec());
    let summary = primes::gap_summary(limit, &thresholds).map_err(err)?;
    report_to_py(py, &summary)
}

#[pyfunction]
fn top_gap_frequencies(limit: u64, count: usize) -> PyResult<Vec<(u64, u64)>> {
    primes::top_gap_frequencies(limit, count).map_err(err)
}

// ---- tuples ----

#[pyfunction]
fn is_admissible(offsets: Vec<i64>) -> PyResult<bool> {
    Ok(tuples::is_admissible(
        &tuples::Tuple::new(offsets).map_err(err)?,
    ))
}

#[pyfunction]
fn tuple_diameter(offsets: Vec<i64>) -> PyResult<i64> {
    Ok(tuples::Tuple::new(offsets).map_err(err)?.diameter())
}

#[pyfunction]
#[pyo3(signature = (k, budget=tuples::DEFAULT_SEARCH_BUDGET))]
fn narrowest_tuple(k: usize, budget: u64) -> PyResult<Vec<i64>> {
    if k == 0 {
        return Err(PyValueError::new_err("k must be >= 1"));
    }
    Ok(tuples::narrowest_tuple(k, budget).offsets().to_vec())
}

// ---- chaos ----

#[pyfunction]
fn logistic_step(y: f64, r: f64) -> PyResult<f64> {
    chaos::logistic_step(y, r).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (y0, r=3.9, iterations=5))]
fn logistic_iterate(y0: f64, r: f64, iterations: u32) -> PyResult<f64> {
    let p = LogisticParams::new(r, iterations).map_err(err)?;
    chaos::logistic_iterate(y0, &p).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (y0, r, n, burn_in=chaos::DEFAULT_BURN_IN, bins=20))]
fn orbit_statistics<'py>(
    py: Python<'py>,
    y0: f64,
    r: f64,
    n: u64,
    burn_in: u64,
    bins: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let stats = chaos::orbit_statistics(y0, r, n, burn_in, bins).map_err(err)?;
    report_to_py(py, &stats)
}

#[pyfunction]
#[pyo3(signature = (r, n, bins=10))]
fn invariant_density_distance(r: f64, n: u64, bins: usize) -> PyResult<f64> {
    chaos::invariant_density_distance(r, n, bins).map_err(err)
}

// ---- geometry ----

#[pyfunction]
fn tau_from_delta(delta: f64) -> f64 {
    geometry::tau_from_delta(delta)
}

#[pyfunction]
fn in_base_region(t: Vec<f64>, spec: &PyPolytopeSpec) -> PyResult<bool> {
    geometry::in_base_region(&t, &spec.inner).map_err(err)
}

#[pyfunction]
fn in_perturbed_region(t: Vec<f64>, spec: &PyPolytopeSpec) -> PyResult<bool> {
    geometry::in_perturbed_region(&t, &spec.inner).map_err(err)
}

#[pyfunction]
fn exact_base_volume(py: Python<'_>, k: usize, tau: f64) -> PyResult<Bound<'_, PyAny>> {
    if k == 0 || tau <= 0.0 {
        return Err(PyValueError::new_err(
            "exact volume needs k >= 1 and tau > 0",
        ));
    }
    report_to_py(py, &geometry::exact_base_volume(k, tau))
}

#[pyfunction]
#[pyo3(signature = (spec, samples=500_000, seed=42))]
fn mc_volume<'py>(
    py: Python<'py>,
    spec: &PyPolytopeSpec,
    samples: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    report_to_py(
        py,
        &geometry::mc_volume(&spec.inner, samples, seed).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (spec, eps=0.0, samples=500_000, seed=42))]
fn check_volume_bound<'py>(
    py: Python<'py>,
    spec: &PyPolytopeSpec,
    eps: f64,
    samples: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    report_to_py(
        py,
        &geometry::check_volume_bound(&spec.inner, eps, samples, seed).map_err(err)?,
    )
}

// ---- weights ----

#[pyfunction]
fn normal_cdf(u: f64) -> f64 {
    weights::normal_cdf(u)
}

#[pyfunction]
fn rmt_weight(t: Vec<f64>) -> f64 {
    weights::rmt_weight(&t)
}

#[pyfunction]
fn eval_monomial_symmetric(parts: Vec<u32>, t: Vec<f64>) -> PyResult<f64> {
    let alpha = weights::Partition::new(parts).map_err(err)?;
    weights::eval_monomial_symmetric(&alpha, &t).map_err(err)
}

// ---- ratio ----

#[pyfunction]
fn exact_ratio<'py>(py: Python<'py>, f: &PySymmetricPolynomial) -> PyResult<Bound<'py, PyAny>> {
    report_to_py(py, &ratio::exact_ratio(&f.inner).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (f, spec, region="base", eps=0.0, samples=500_000, seed=42))]
fn mc_ratio<'py>(
    py: Python<'py>,
    f: &PySymmetricPolynomial,
    spec: &PyPolytopeSpec,
    region: &str,
    eps: f64,
    samples: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let region = parse_region(region)?;
    let fp = weights::PerturbedFunction::new(f.inner.clone(), eps).map_err(err)?;
    report_to_py(
        py,
        &ratio::mc_ratio(&fp, &spec.inner, region, samples, seed).map_err(err)?,
    )
}

fn parse_region(region: &str) -> PyResult<ratio::Region> {
    match region {
        "base" => Ok(ratio::Region::Base),
        "perturbed" => Ok(ratio::Region::Perturbed),
        other => Err(PyValueError::new_err(format!(
            "unknown region {other:?} (expected 'base' or 'perturbed')"
        ))),
    }
}

// ---- optimizer ----

#[pyfunction]
fn enumerate_basis(k: usize, d: u32) -> Vec<Vec<u32>> {
    optimizer::enumerate_basis(k, d)
        .partitions
        .iter()
        .map(|p| p.parts().to_vec())
        .collect()
}

#[pyfunction]
fn maximize_ratio(py: Python<'_>, k: usize, d: u32) -> PyResult<Bound<'_, PyAny>> {
    let basis = optimizer::enumerate_basis(k, d);
    report_to_py(
        py,
        &optimizer::maximize_ratio(&basis, GramMode::ExactSimplex).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (spec, d, eps=0.0, samples=200_000, seed=42))]
fn optimize_perturbed<'py>(
    py: Python<'py>,
    spec: &PyPolytopeSpec,
    d: u32,
    eps: f64,
    samples: u64,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let basis = optimizer::enumerate_basis(spec.inner.k, d);
    report_to_py(
        py,
        &optimizer::optimize_perturbed(&basis, &spec.inner, eps, samples, seed).map_err(err)?,
    )
}

// ---- predictor ----

#[pyfunction]
fn m_prime_asymptotic(k: u64, delta: f64, eps: f64) -> PyResult<f64> {
    predictor::m_prime_asymptotic(k, delta, eps).map_err(err)
}

#[pyfunction]
fn extrapolate_m(m_base: f64, k: u64, delta: f64, eps: f64) -> PyResult<f64> {
    predictor::extrapolate_m(m_base, k, delta, eps).map_err(err)
}

#[pyfunction]
fn gap_ansatz(k: u64, delta: f64, eps: f64) -> PyResult<f64> {
    predictor::gap_ansatz(k, delta, eps).map_err(err)
}

#[pyfunction]
fn conjecture_bound(delta: f64, eps: f64) -> PyResult<f64> {
    predictor::conjecture_bound(delta, eps).map_err(err)
}

#[pyfunction]
fn min_k_for_level(
    m: u64,
    baseline: Vec<(u64, f64)>,
    delta: f64,
    eps: f64,
) -> PyResult<Option<u64>> {
    predictor::min_k_for_level(m, &baseline, delta, eps).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (k, delta, eps, m_base=None))]
fn predict<'py>(
    py: Python<'py>,
    k: u64,
    delta: f64,
    eps: f64,
    m_base: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    report_to_py(py, &predictor::predict(k, delta, eps, m_base).map_err(err)?)
}

#[pymodule]
fn sievelab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolytopeSpec>()?;
    m.add_class::<PySymmetricPolynomial>()?;
    m.add_function(wrap_pyfunction!(enumerate_primes, m)?)?;
    m.add_function(wrap_pyfunction!(gap_summary, m)?)?;
    m.add_function(wrap_pyfunction!(top_gap_frequencies, m)?)?;
    m.add_function(wrap_pyfunction!(is_admissible, m)?)?;
    m.add_function(wrap_pyfunction!(tuple_diameter, m)?)?;
    m.add_function(wrap_pyfunction!(narrowest_tuple, m)?)?;
    m.add_function(wrap_pyfunction!(logistic_step, m)?)?;
    m.add_function(wrap_pyfunction!(logistic_iterate, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_statistics, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_density_distance, m)?)?;
    m.add_function(wrap_pyfunction!(tau_from_delta, m)?)?;
    m.add_function(wrap_pyfunction!(in_base_region, m)?)?;
    m.add_function(wrap_pyfunction!(in_perturbed_region, m)?)?;
    m.add_function(wrap_pyfunction!(exact_base_volume, m)?)?;
    m.add_function(wrap_pyfunction!(mc_volume, m)?)?;
    m.add_function(wrap_pyfunction!(check_volume_bound, m)?)?;
    m.add_function(wrap_pyfunction!(normal_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(rmt_weight, m)?)?;
    m.add_function(wrap_pyfunction!(eval_monomial_symmetric, m)?)?;
    m.add_function(wrap_pyfunction!(exact_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(mc_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_basis, m)?)?;
    m.add_function(wrap_pyfunction!(maximize_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_perturbed, m)?)?;
    m.add_function(wrap_pyfunction!(m_prime_asymptotic, m)?)?;
    m.add_function(wrap_pyfunction!(extrapolate_m, m)?)?;
    m.add_function(wrap_pyfunction!(gap_ansatz, m)?)?;
    m.add_function(wrap_pyfunction!(conjecture_bound, m)?)?;
    m.add_function(wrap_pyfunction!(min_k_for_level, m)?)?;
    m.add_function(wrap_pyfunction!(predict, m)?)?;
    Ok(())
}
