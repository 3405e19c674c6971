//! Python bindings. Reports come back as plain dicts (parsed from the same
//! JSON the CLI prints), so scripts see identical content.

use mcolour::graph::WitnessQuery;
use mcolour::report::{self, CommandError, RunReport};
use mcolour::spin::{self, CoverKind};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cover_kind(name: &str) -> PyResult<CoverKind> {
    name.parse().map_err(value_error)
}

fn to_dict<'py>(py: Python<'py>, report: &RunReport) -> PyResult<Bound<'py, PyDict>> {
    let json = py.import("json")?;
    json.call_method1("loads", (report.to_json(),))?.cast_into::<PyDict>().map_err(Into::into)
}

#[pyclass(name = "Perm", module = "mcolour_py", eq, hash, frozen, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyPerm(mcolour::Perm);

#[pymethods]
impl PyPerm {
    /// One-based images, e.g. `Perm([2, 1, 3])`.
    #[new]
    fn new(images: Vec<usize>) -> PyResult<Self> {
        mcolour::Perm::from_images(&images).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_cycles(degree: usize, cycles: Vec<Vec<usize>>) -> PyResult<Self> {
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        mcolour::Perm::from_cycles(degree, &refs).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn identity(degree: usize) -> Self {
        Self(mcolour::Perm::identity(degree))
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn images(&self) -> Vec<usize> {
        self.0.images()
    }

    fn apply(&self, point: usize) -> PyResult<usize> {
        self.0.checked_apply(point).map_err(value_error)
    }

    /// `self` first, then `other`.
    fn compose(&self, other: &PyPerm) -> PyResult<Self> {
        self.0.compose(&other.0).map(Self).map_err(value_error)
    }

    fn __mul__(&self, other: &PyPerm) -> PyResult<Self> {
        self.compose(other)
    }

    fn inverse(&self) -> Self {
        Self(self.0.inverse())
    }

    fn order(&self) -> usize {
        self.0.order()
    }

    fn cycles(&self) -> Vec<Vec<usize>> {
        self.0.cycles()
    }

    fn cycle_type(&self) -> Vec<usize> {
        self.0.cycle_type()
    }

    fn is_involution(&self) -> bool {
        self.0.is_involution()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Perm({:?})", self.0.images())
    }
}

#[pyclass(name = "ColouredGraph", module = "mcolour_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph(mcolour::ColouredGraph);

#[pymethods]
impl PyGraph {
    #[staticmethod]
    #[pyo3(signature = (n, m, seed = 0))]
    fn random(n: usize, m: usize, seed: u64) -> PyResult<Self> {
        mcolour::ColouredGraph::random(n, m, seed).map(Self).map_err(value_error)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        mcolour::ColouredGraph::from_json(text).map(Self).map_err(value_error)
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }

    fn to_dot(&self) -> String {
        self.0.to_dot()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.0.m()
    }

    fn colour(&self, u: usize, v: usize) -> PyResult<usize> {
        let n = self.0.n();
        if u == v || u >= n || v >= n {
            return Err(value_error(format!("({u}, {v}) is not a pair of distinct vertices below {n}")));
        }
        Ok(self.0.colour(u, v).get())
    }

    fn histogram(&self) -> Vec<usize> {
        self.0.histogram()
    }

    /// Recoloured copy: colour `c` becomes `pi(c)`.
    fn recolour(&self, pi: &PyPerm) -> PyResult<Self> {
        self.0.recolour(&pi.0).map(Self).map_err(value_error)
    }

    fn is_colour_consistent(&self, s: &PyPerm, pi: &PyPerm) -> PyResult<bool> {
        self.0.is_colour_consistent(&s.0, &pi.0).map_err(value_error)
    }

    /// `parts[i]` lists the vertices that must see colour `i + 1`.
    fn find_witness(&self, parts: Vec<Vec<usize>>) -> PyResult<Option<usize>> {
        let query = WitnessQuery::new(parts).map_err(value_error)?;
        query.validate(&self.0).map_err(value_error)?;
        Ok(self.0.find_witness(&query))
    }

    /// Returns the extended graph and whether every query of size <= k was met.
    #[pyo3(signature = (k, seed = 0, rounds = 8))]
    fn saturate(&self, k: usize, seed: u64, rounds: usize) -> PyResult<(Self, bool)> {
        let out = self.0.saturate(k, seed, rounds).map_err(value_error)?;
        Ok((Self(out.graph), out.achieved))
    }

    fn unsatisfied_queries(&self, k: usize) -> Vec<Vec<Vec<usize>>> {
        self.0
            .unsatisfied_queries(k)
            .iter()
            .map(|q| q.parts().to_vec())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("ColouredGraph(n={}, m={})", self.0.n(), self.0.m())
    }
}

#[pyclass(name = "PinElement", module = "mcolour_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPin(mcolour::PinElement);

#[pymethods]
impl PyPin {
    /// The canonical lift of `perm` into the `cover` ("tilde" or "hat").
    #[staticmethod]
    fn lift(perm: &PyPerm, cover: &str) -> PyResult<Self> {
        spin::lift(&perm.0, cover_kind(cover)?).map(Self).map_err(value_error)
    }

    fn __mul__(&self, other: &PyPin) -> PyResult<Self> {
        self.0.pin_mul(&other.0).map(Self).map_err(value_error)
    }

    fn __neg__(&self) -> Self {
        Self(self.0.neg())
    }

    fn __eq__(&self, other: &PyPin) -> bool {
        self.0 == other.0
    }

    fn order(&self) -> PyResult<usize> {
        self.0.order().map_err(value_error)
    }

    fn project(&self) -> PyResult<PyPerm> {
        self.0.project().map(PyPerm).map_err(value_error)
    }

    /// `(blade indices, numerator, power of 1/sqrt(2))` per nonzero term.
    fn terms(&self) -> Vec<(Vec<usize>, i64, u32)> {
        self.0.encode()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PinElement({})", self.0)
    }
}

#[pyfunction]
fn enumerate_sym(degree: usize) -> PyResult<Vec<PyPerm>> {
    mcolour::perm::enumerate_sym(degree)
        .map(|perms| perms.into_iter().map(PyPerm).collect())
        .map_err(value_error)
}

#[pyfunction]
fn double_coset_lower_bound(m: usize, k: usize) -> bool {
    mcolour::perm::double_coset_lower_bound(m, k)
}

fn run<'py>(py: Python<'py>, result: Result<RunReport, CommandError>) -> PyResult<Bound<'py, PyDict>> {
    to_dict(py, &result.map_err(value_error)?)
}

#[pyfunction]
#[pyo3(signature = (m, orbits = 1, seed = 0))]
fn complement(py: Python<'_>, m: usize, orbits: usize, seed: u64) -> PyResult<Bound<'_, PyDict>> {
    run(py, py.detach(|| report::complement(m, orbits, seed).map(|(r, _)| r)))
}

#[pyfunction]
#[pyo3(signature = (m, cover, orbits = 1, seed = 0))]
fn supplement<'py>(
    py: Python<'py>,
    m: usize,
    cover: &str,
    orbits: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let kind = cover_kind(cover)?;
    run(py, py.detach(|| report::supplement(m, kind, orbits, seed).map(|(r, _)| r)))
}

#[pyfunction]
fn cover_table<'py>(py: Python<'py>, m: usize, cover: &str) -> PyResult<Bound<'py, PyDict>> {
    let kind = cover_kind(cover)?;
    run(py, py.detach(|| report::cover_table(m, kind)))
}

#[pyfunction]
#[pyo3(signature = (graph, seed = 0))]
fn obstruction<'py>(py: Python<'py>, graph: &PyGraph, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    run(py, report::obstruction(&graph.0, seed))
}

#[pyfunction]
#[pyo3(signature = (max_m = 10, max_k = 10))]
fn coset_bound(py: Python<'_>, max_m: usize, max_k: usize) -> PyResult<Bound<'_, PyDict>> {
    run(py, report::coset_bound(max_m, max_k))
}

#[pymodule]
fn mcolour_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPerm>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyPin>()?;
    m.add_function(wrap_pyfunction!(enumerate_sym, m)?)?;
    m.add_function(wrap_pyfunction!(double_coset_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(complement, m)?)?;
    m.add_function(wrap_pyfunction!(supplement, m)?)?;
    m.add_function(wrap_pyfunction!(cover_table, m)?)?;
    m.add_function(wrap_pyfunction!(obstruction, m)?)?;
    m.add_function(wrap_pyfunction!(coset_bound, m)?)?;
    Ok(())
}
