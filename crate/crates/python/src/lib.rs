//! Python bindings. Graphs and ideals are wrapped as classes; structured
//! results (invariants, reports, Betti tables) come back as plain Python
//! objects decoded from their JSON form.

use closurestab::harness::{self, Check, CorpusSpec, RunOptions};
use closurestab::io::{decode_graph6, encode_graph6};
use closurestab::{stability, Error};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Violation(msg) => PyRuntimeError::new_err(format!("theorem violation: {msg}")),
        Error::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn to_python<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Graph", module = "pyclosurestab", frozen)]
pub struct PyGraph(closurestab::Graph);

#[pymethods]
impl PyGraph {
    /// A simple graph on vertices `1..=vertices` with the given edges.
    #[new]
    fn new(vertices: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        closurestab::Graph::new(vertices, &edges).map(PyGraph).map_err(to_py_err)
    }

    #[staticmethod]
    fn from_graph6(text: &str) -> PyResult<Self> {
        decode_graph6(text.trim()).map(PyGraph).map_err(to_py_err)
    }

    #[staticmethod]
    fn cycle(n: usize) -> Self {
        PyGraph(closurestab::Graph::cycle(n))
    }

    #[staticmethod]
    fn path(n: usize) -> Self {
        PyGraph(closurestab::Graph::path(n))
    }

    #[staticmethod]
    fn complete(n: usize) -> Self {
        PyGraph(closurestab::Graph::complete(n))
    }

    fn disjoint_union(&self, other: PyRef<'_, PyGraph>) -> PyResult<Self> {
        self.0.disjoint_union(&other.0).map(PyGraph).map_err(to_py_err)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges()
    }

    fn graph6(&self) -> String {
        encode_graph6(&self.0)
    }

    fn is_bipartite(&self) -> bool {
        self.0.is_bipartite()
    }

    fn is_pseudoforest(&self) -> bool {
        self.0.is_pseudoforest()
    }

    fn edge_ideal(&self) -> PyMonomialIdeal {
        PyMonomialIdeal(closurestab::MonomialIdeal::edge_ideal(&self.0))
    }

    fn __eq__(&self, other: PyRef<'_, PyGraph>) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Graph.from_graph6({:?})", encode_graph6(&self.0))
    }
}

#[pyclass(name = "MonomialIdeal", module = "pyclosurestab", frozen)]
pub struct PyMonomialIdeal(closurestab::MonomialIdeal);

#[pymethods]
impl PyMonomialIdeal {
    /// An ideal of `K[x_1..x_ambient]` from generator exponent vectors.
    #[new]
    fn new(ambient: usize, generators: Vec<Vec<u32>>) -> PyResult<Self> {
        let gens = generators.into_iter().map(closurestab::Monomial::new).collect();
        closurestab::MonomialIdeal::new(ambient, gens).map(PyMonomialIdeal).map_err(to_py_err)
    }

    /// Parses generators such as `"x1*x2, x3^2"`.
    #[staticmethod]
    fn parse(ambient: usize, text: &str) -> PyResult<Self> {
        let gens = text
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| closurestab::Monomial::parse(t, ambient))
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py_err)?;
        closurestab::MonomialIdeal::new(ambient, gens).map(PyMonomialIdeal).map_err(to_py_err)
    }

    #[getter]
    fn ambient(&self) -> usize {
        self.0.ambient()
    }

    fn generators(&self) -> Vec<Vec<u32>> {
        self.0.generators().iter().map(|g| g.exponents().to_vec()).collect()
    }

    fn contains(&self, exponents: Vec<u32>) -> PyResult<bool> {
        if exponents.len() != self.0.ambient() {
            return Err(PyValueError::new_err("exponent vector has the wrong length"));
        }
        Ok(self.0.contains(&closurestab::Monomial::new(exponents)))
    }

    fn power(&self, n: usize) -> Self {
        PyMonomialIdeal(self.0.power(n))
    }

    fn closure_power(&self, n: usize) -> PyResult<Self> {
        closure_power(self, n)
    }

    fn __eq__(&self, other: PyRef<'_, PyMonomialIdeal>) -> bool {
        self.0 == other.0
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MonomialIdeal({}, {:?})", self.0.ambient(), self.generators())
    }
}

/// Minimal generators of the integral closure of `ideal^n`.
#[pyfunction]
fn closure_power(ideal: &PyMonomialIdeal, n: usize) -> PyResult<PyMonomialIdeal> {
    closurestab::closure_power(&ideal.0, n).map(PyMonomialIdeal).map_err(to_py_err)
}

/// Supports of the associated primes of `R/ideal`, as sorted variable lists.
#[pyfunction]
fn associated_primes(ideal: &PyMonomialIdeal) -> PyResult<Vec<Vec<usize>>> {
    let ass = closurestab::associated_primes(&ideal.0).map_err(to_py_err)?;
    Ok(ass.primes().iter().map(|p| p.vars().to_vec()).collect())
}

/// `depth R/ideal`.
#[pyfunction]
fn depth(ideal: &PyMonomialIdeal) -> PyResult<usize> {
    closurestab::depth_quotient(&ideal.0).map_err(to_py_err)
}

/// `{i: {multidegree: beta_{i, multidegree}}}` with multidegrees as tuples.
#[pyfunction]
fn betti_numbers<'py>(py: Python<'py>, ideal: &PyMonomialIdeal) -> PyResult<Bound<'py, PyAny>> {
    let table = closurestab::betti_numbers(&ideal.0).map_err(to_py_err)?;
    let dict = pyo3::types::PyDict::new(py);
    for (i, row) in &table.entries {
        let inner = pyo3::types::PyDict::new(py);
        for (alpha, beta) in row {
            inner.set_item(pyo3::types::PyTuple::new(py, alpha)?, beta)?;
        }
        dict.set_item(i, inner)?;
    }
    Ok(dict.into_any())
}

#[pyfunction]
fn invariants<'py>(py: Python<'py>, graph: &PyGraph) -> PyResult<Bound<'py, PyAny>> {
    to_python(py, &stability::Invariants::of(&graph.0))
}

/// Stability report: Ass and depth sequences and both indices.
#[pyfunction]
#[pyo3(signature = (graph, extra_powers = 0))]
fn stability_report<'py>(py: Python<'py>, graph: &PyGraph, extra_powers: usize) -> PyResult<Bound<'py, PyAny>> {
    let opts = stability::StabilityOptions { paranoid: false, extra_powers };
    let report = stability::report_with(&graph.0, opts).map_err(to_py_err)?;
    to_python(py, &report)
}

/// Runs the named checks over all connected graphs up to `max_vertices`.
#[pyfunction]
#[pyo3(signature = (max_vertices, checks = "all"))]
fn verify_exhaustive<'py>(py: Python<'py>, max_vertices: usize, checks: &str) -> PyResult<Bound<'py, PyAny>> {
    let opts = RunOptions { checks: Check::parse_list(checks).map_err(to_py_err)?, ..RunOptions::default() };
    let report = harness::run(&CorpusSpec::exhaustive(max_vertices), &opts).map_err(to_py_err)?;
    to_python(py, &report)
}

#[pymodule]
fn pyclosurestab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyMonomialIdeal>()?;
    m.add_function(wrap_pyfunction!(closure_power, m)?)?;
    m.add_function(wrap_pyfunction!(associated_primes, m)?)?;
    m.add_function(wrap_pyfunction!(depth, m)?)?;
    m.add_function(wrap_pyfunction!(betti_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(invariants, m)?)?;
    m.add_function(wrap_pyfunction!(stability_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify_exhaustive, m)?)?;
    Ok(())
}
