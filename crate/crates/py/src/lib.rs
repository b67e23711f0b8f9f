//! Python bindings. Lengths and coordinates cross the boundary as exact
//! `"num/den"` strings; reports come back as dicts.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

use ppg::algorithm::AlgorithmKind;
use ppg::experiment::{ExperimentConfig, OracleMode};
use ppg::io::{instance_from_json, instance_to_json};
use ppg::rigidity::{default_cap, enumerate_layer_drawings, Pins, Solver};
use ppg::{rational, Error, Round};

fn err(e: Error) -> PyErr {
    match e {
        Error::VerificationFailed(_) | Error::CoreNotRigid(_) | Error::InconsistentStrategy(_) | Error::Protocol(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn to_py<T: Serialize>(py: Python<'_>, v: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn coords(p: &ppg::Placement) -> Vec<String> {
    p.coords().iter().map(rational::format).collect()
}

/// A point placement graph with exact edge lengths.
#[pyclass(name = "Ppg", skip_from_py_object)]
#[derive(Clone)]
struct PyPpg {
    inner: ppg::Ppg,
}

#[pymethods]
impl PyPpg {
    #[new]
    fn new(n: usize) -> Self {
        PyPpg { inner: ppg::Ppg::new(n) }
    }

    /// `length` is an exact rational such as `"7/3"` or `"5"`.
    #[pyo3(signature = (a, b, length, round = 1))]
    fn add_edge(&mut self, a: usize, b: usize, length: &str, round: u8) -> PyResult<()> {
        let r = Round::from_number(round).map_err(err)?;
        let l = rational::parse(length).map_err(err)?;
        self.inner.add_edge(a, b, r, l).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize, u8, String)> {
        self.inner
            .edges()
            .iter()
            .map(|e| (e.a.0, e.b.0, e.round.number(), rational::format(&e.length)))
            .collect()
    }

    fn to_json(&self) -> String {
        instance_to_json(&self.inner)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        Ok(PyPpg {
            inner: instance_from_json(s).map_err(err)?,
        })
    }

    /// Canonical placements, at most `limit` of them.
    #[pyo3(signature = (limit = None, cap = None))]
    fn placements(&self, limit: Option<usize>, cap: Option<usize>) -> PyResult<Vec<Vec<String>>> {
        let mut s = Solver::default().with_cap(cap.unwrap_or_else(default_cap));
        if let Some(l) = limit {
            s = s.with_limit(l);
        }
        let set = s.solve(&self.inner, &Pins::new()).map_err(err)?;
        Ok(set.placements.iter().map(coords).collect())
    }

    #[pyo3(signature = (cap = None))]
    fn is_rigid(&self, cap: Option<usize>) -> PyResult<bool> {
        Ok(self.placements(Some(2), cap)?.len() == 1)
    }

    #[pyo3(signature = (limit = 1000, cap = None))]
    fn layer_drawing_count(&self, limit: usize, cap: Option<usize>) -> PyResult<usize> {
        let d = enumerate_layer_drawings(&self.inner, limit, cap.unwrap_or_else(default_cap)).map_err(err)?;
        Ok(d.len())
    }

    #[pyo3(signature = (placement = None))]
    fn to_dot(&self, placement: Option<Vec<String>>) -> PyResult<String> {
        let p = placement
            .map(|xs| {
                let xs = xs.iter().map(|x| rational::parse(x)).collect::<Result<Vec<_>, _>>()?;
                ppg::Placement::literal(xs)
            })
            .transpose()
            .map_err(err)?;
        Ok(ppg::dot::export_dot(&self.inner, p.as_ref()))
    }

    fn degree2_paths(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &ppg::lowerbound::check_degree2_paths(&self.inner))
    }

    fn density(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &ppg::lowerbound::density(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("Ppg(n={}, edges={})", self.inner.n(), self.inner.edge_count())
    }
}

/// Runs an algorithm against an oracle; returns the report dict.
#[pyfunction]
#[pyo3(signature = (algorithm, b = None, n = None, oracle = "honest", seed = 0, verify = false))]
fn run(
    py: Python<'_>,
    algorithm: &str,
    b: Option<usize>,
    n: Option<usize>,
    oracle: &str,
    seed: u64,
    verify: bool,
) -> PyResult<(Py<PyAny>, PyPpg)> {
    let algorithm = match algorithm {
        "three-path" => AlgorithmKind::ThreePath,
        "triangle" => AlgorithmKind::Triangle,
        "quad" => AlgorithmKind::Quad,
        other => return Err(PyValueError::new_err(format!("unknown algorithm {other:?}"))),
    };
    let oracle = match oracle {
        "honest" => OracleMode::Honest,
        "adversary" => OracleMode::Adversary,
        other => return Err(PyValueError::new_err(format!("unknown oracle {other:?}"))),
    };
    let config = ExperimentConfig {
        algorithm,
        b,
        n,
        oracle,
        seed,
        verify,
    };
    let out = py.detach(|| config.run()).map_err(err)?;
    Ok((to_py(py, &out)?, PyPpg { inner: out.graph }))
}

/// Violations of the six serial lists for named component lengths.
#[pyfunction]
fn check_three_path(py: Python<'_>, lengths: BTreeMap<String, String>) -> PyResult<Py<PyAny>> {
    let json = serde_json::to_string(&lengths).expect("string map");
    let l = ppg::io::lengths_from_json(&json).map_err(err)?;
    to_py(py, &ppg::conditions::check_three_path(&l).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (max_n = 5, samples = 50, seed = 0))]
fn atlas(py: Python<'_>, max_n: usize, samples: usize, seed: u64) -> PyResult<Py<PyAny>> {
    let r = py.detach(|| ppg::atlas::run_atlas(max_n, samples, seed)).map_err(err)?;
    to_py(py, &r)
}

#[pyfunction]
fn attack_table(py: Python<'_>) -> PyResult<Py<PyAny>> {
    to_py(py, &ppg::lowerbound::attack_table())
}

#[pyfunction]
fn type_a_density(k: usize) -> PyResult<String> {
    if k == 0 {
        return Err(PyValueError::new_err("k must be positive"));
    }
    Ok(rational::format(&ppg::lowerbound::type_a_density(k)))
}

#[pyfunction]
fn canonicalize(xs: Vec<String>) -> PyResult<Vec<String>> {
    let xs = xs.iter().map(|x| rational::parse(x)).collect::<Result<Vec<_>, _>>().map_err(err)?;
    Ok(coords(&ppg::canonicalize(&xs).map_err(err)?))
}

#[pymodule]
fn ppg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPpg>()?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(check_three_path, m)?)?;
    m.add_function(wrap_pyfunction!(atlas, m)?)?;
    m.add_function(wrap_pyfunction!(attack_table, m)?)?;
    m.add_function(wrap_pyfunction!(type_a_density, m)?)?;
    m.add_function(wrap_pyfunction!(canonicalize, m)?)?;
    Ok(())
}
