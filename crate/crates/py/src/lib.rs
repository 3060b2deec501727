//! Python bindings. Structured results come back as plain dicts and lists;
//! exact rationals are `"p/q"` strings.

use affine_sle::affine::{build_weyl, ModuleVector, WeylModule as Inner};
use affine_sle::lattice::{character_coefficients, verify_state_identities, Convention};
use affine_sle::lie::{build_sl, Weight};
use affine_sle::null::{build_candidate, solve, verify_null, Tie};
use affine_sle::rational::{format_q, parse_q, Q};
use affine_sle::sde::{loewner_convergence, martingale_mc, run_trace, MartingaleConfig, TraceConfig};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn err(e: affine_sle::Error) -> PyErr {
    match e {
        affine_sle::Error::Parse(_) | affine_sle::Error::Config(_) | affine_sle::Error::InvalidRank(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_algebra(s: &str) -> PyResult<usize> {
    s.trim()
        .to_ascii_lowercase()
        .strip_prefix("sl")
        .and_then(|r| r.parse().ok())
        .ok_or_else(|| PyValueError::new_err(format!("unknown algebra {s:?}")))
}

fn parse_tie(s: &str) -> PyResult<Tie> {
    match s {
        "per-generator" => Ok(Tie::PerGenerator),
        "single-tau" => Ok(Tie::SingleTau),
        _ => Err(PyValueError::new_err(format!("tie must be 'per-generator' or 'single-tau', got {s:?}"))),
    }
}

fn parse_rationals(xs: &[String]) -> PyResult<Vec<Q>> {
    xs.iter().map(|x| parse_q(x).map_err(err)).collect()
}

fn parse_convention(s: &str) -> PyResult<Convention> {
    match s.to_ascii_uppercase().as_str() {
        "A" => Ok(Convention::A),
        "B" => Ok(Convention::B),
        _ => Err(PyValueError::new_err("convention must be 'A' or 'B'")),
    }
}

/// Weyl module of `sl_N` at a level, truncated at `max_degree`.
#[pyclass(name = "WeylModule", frozen)]
struct WeylModule {
    inner: Inner,
}

impl WeylModule {
    fn top(&self, top: Option<usize>) -> PyResult<ModuleVector> {
        match top {
            None => Ok(self.inner.highest_weight_vector()),
            Some(t) if t < self.inner.dim(0) => Ok(self.inner.top_vector(t)),
            Some(t) => Err(PyValueError::new_err(format!("top index {t} out of range"))),
        }
    }
}

#[pymethods]
impl WeylModule {
    #[new]
    #[pyo3(signature = (algebra = "sl2", level = 1, weight = "0", max_degree = 4))]
    fn new(algebra: &str, level: i64, weight: &str, max_degree: i64) -> PyResult<Self> {
        let lie = build_sl(parse_algebra(algebra)?).map_err(err)?;
        let w = Weight::parse(lie.rank(), weight).map_err(err)?;
        Ok(WeylModule { inner: build_weyl(&lie, level, &w, max_degree).map_err(err)? })
    }

    #[getter]
    fn central_charge(&self) -> String {
        format_q(&self.inner.central_charge())
    }

    #[getter]
    fn conformal_weight(&self) -> String {
        format_q(&self.inner.conformal_weight())
    }

    #[getter]
    fn max_degree(&self) -> i64 {
        self.inner.max_degree()
    }

    /// Dimension of each degree slice of the Weyl module.
    fn dims(&self) -> Vec<usize> {
        (0..=self.inner.max_degree()).map(|d| self.inner.dim(d)).collect()
    }

    /// Rank of the Gram matrix at each degree, i.e. the graded dimension of the quotient.
    fn gram_ranks(&self) -> Vec<usize> {
        (0..=self.inner.max_degree()).map(|d| self.inner.gram(d).rank()).collect()
    }

    /// Solves for the variances making the candidate null.
    #[pyo3(signature = (n = 2, tie = "per-generator", top = None))]
    fn solve<'py>(&self, py: Python<'py>, n: i64, tie: &str, top: Option<usize>) -> PyResult<Bound<'py, PyAny>> {
        let c = build_candidate(&self.inner, &self.top(top)?, n, parse_tie(tie)?).map_err(err)?;
        to_py(py, &solve(&self.inner, &c).map_err(err)?)
    }

    /// Nullity certificate of the candidate at `values` (one per unknown).
    #[pyo3(signature = (values, n = 2, tie = "per-generator", top = None))]
    fn verify<'py>(
        &self,
        py: Python<'py>,
        values: Vec<String>,
        n: i64,
        tie: &str,
        top: Option<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let c = build_candidate(&self.inner, &self.top(top)?, n, parse_tie(tie)?).map_err(err)?;
        let vals = parse_rationals(&values)?;
        if vals.len() != c.unknowns.len() {
            return Err(PyValueError::new_err(format!("expected values for {:?}", c.unknowns)));
        }
        to_py(py, &verify_null(&self.inner, &c.evaluate(&vals)).map_err(err)?)
    }

    /// Monte Carlo martingale test of `G_t w`.
    #[pyo3(signature = (kappa0, kappa, n = 2, t = 0.5, dt = 1e-3, paths = 10_000, seed = 1, top = None))]
    #[allow(clippy::too_many_arguments)]
    fn martingale<'py>(
        &self,
        py: Python<'py>,
        kappa0: String,
        kappa: Vec<String>,
        n: i64,
        t: f64,
        dt: f64,
        paths: usize,
        seed: u64,
        top: Option<usize>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let cfg = MartingaleConfig {
            n,
            kappa0: parse_q(&kappa0).map_err(err)?,
            kappa: parse_rationals(&kappa)?,
            t_final: t,
            dt,
            paths,
            max_degree: self.inner.max_degree(),
            seed,
        };
        let w = self.top(top)?;
        let report = py.detach(|| martingale_mc(&self.inner, &w, &cfg)).map_err(err)?;
        to_py(py, &report)
    }

    fn __repr__(&self) -> String {
        format!(
            "WeylModule(sl{}, level={}, weight={}, max_degree={})",
            self.inner.lie().n(),
            self.inner.level(),
            self.inner.weight(),
            self.inner.max_degree()
        )
    }
}

/// Degree-4 state identities in the lattice realization.
#[pyfunction]
#[pyo3(signature = (algebra = "sl2", convention = "A"))]
fn lattice_identities<'py>(py: Python<'py>, algebra: &str, convention: &str) -> PyResult<Bound<'py, PyAny>> {
    let r = verify_state_identities(parse_algebra(algebra)?, parse_convention(convention)?).map_err(err)?;
    to_py(py, &r)
}

/// Coefficients of the level-1 vacuum character of `sl_{rank+1}` up to `max_degree`.
#[pyfunction]
fn character(rank: usize, max_degree: i64) -> PyResult<Vec<u64>> {
    character_coefficients(rank, max_degree).map_err(err)
}

/// One simulated path of `f`, `theta` and the `g` residual.
#[pyfunction]
#[pyo3(signature = (n, kappa0, kappa, t = 0.5, dt = 1e-3, depth = 12, seed = 1, stride = 1))]
#[allow(clippy::too_many_arguments)]
fn trace<'py>(
    py: Python<'py>,
    n: usize,
    kappa0: f64,
    kappa: Vec<f64>,
    t: f64,
    dt: f64,
    depth: usize,
    seed: u64,
    stride: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = TraceConfig { n, kappa0, kappa, t_final: t, dt, depth, seed, stride };
    to_py(py, &run_trace(&cfg).map_err(err)?)
}

/// Strong-order fit of the `g` residual over `dt = t / 2^level`.
#[pyfunction]
#[pyo3(signature = (n = 2, kappa0 = 8.0 / 3.0, t = 1.0, levels = vec![8, 9, 10, 11, 12], paths = 50, depth = 12, seed = 1))]
#[allow(clippy::too_many_arguments)]
fn convergence<'py>(
    py: Python<'py>,
    n: usize,
    kappa0: f64,
    t: f64,
    levels: Vec<u32>,
    paths: usize,
    depth: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let r = py.detach(|| loewner_convergence(n, kappa0, t, &levels, paths, depth, seed)).map_err(err)?;
    to_py(py, &r)
}

#[pymodule]
#[pyo3(name = "affine_sle")]
pub fn affine_sle_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", affine_sle::VERSION)?;
    m.add_class::<WeylModule>()?;
    m.add_function(wrap_pyfunction!(lattice_identities, m)?)?;
    m.add_function(wrap_pyfunction!(character, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(convergence, m)?)?;
    Ok(())
}
