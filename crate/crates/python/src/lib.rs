//! Python bindings: graphs, homomorphism counts, HDE bounds, certificates
//! and target constructions.

use hde_core::bounds::{self, HdeResult, Primal};
use hde_core::certificate::{self, Certificate};
use hde_core::constructions::{self, ProjectedTarget};
use hde_core::graph::parse_builtin_spec;
use hde_core::hom;
use hde_core::mrf;
use hde_core::polymatroid::SetFunction;
use hde_core::rational::{parse_rational, Rational};
use hde_core::{Error, Graph, VertexSet};
use num_bigint::{BigInt, BigUint};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

fn err(e: Error) -> PyErr {
    match e {
        Error::UnknownBuiltin(_)
        | Error::InvalidParameter(_)
        | Error::Parse { .. }
        | Error::VertexOutOfRange { .. }
        | Error::NotChordal(_)
        | Error::NotSeriesParallel(_)
        | Error::NotHomomorphism(_)
        | Error::InvalidOrdering(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    let (num, den): (BigInt, BigInt) = (r.numer().clone(), r.denom().clone());
    py.import("fractions")?.getattr("Fraction")?.call1((num, den))
}

/// Accepts `Fraction`, `int`, `str` ("1/2", "0.25") and `float`.
fn to_rational(v: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let s = if v.hasattr("numerator")? && v.hasattr("denominator")? {
        format!("{}/{}", v.getattr("numerator")?.str()?, v.getattr("denominator")?.str()?)
    } else {
        v.str()?.to_string()
    };
    parse_rational(&s).ok_or_else(|| PyValueError::new_err(format!("not a rational: {s}")))
}

/// A dict from vertex collections to values, as a set function on `n` vertices.
fn to_set_function(n: usize, d: &Bound<'_, PyDict>) -> PyResult<SetFunction> {
    let mut f = SetFunction::zero(n);
    for (k, v) in d.iter() {
        let vs: Vec<usize> = k.extract()?;
        let a = VertexSet::from_vertices(n, vs).map_err(err)?;
        f.set(a, to_rational(&v)?);
    }
    Ok(f)
}

fn set_function_dict<'py>(py: Python<'py>, pairs: impl IntoIterator<Item = (VertexSet, Rational)>) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    for (a, v) in pairs {
        let key = PyTuple::new(py, a.iter().collect::<Vec<_>>())?;
        d.set_item(key, fraction(py, &v)?)?;
    }
    Ok(d)
}

#[pyclass(name = "Graph", module = "hde", frozen, from_py_object)]
#[derive(Clone)]
pub struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges, directed = false, name = None))]
    fn new(n: usize, edges: Vec<(usize, usize)>, directed: bool, name: Option<String>) -> PyResult<Self> {
        let g = if directed { Graph::new(n, edges) } else { Graph::undirected(n, edges) }.map_err(err)?;
        Ok(PyGraph {
            inner: match name {
                Some(s) => g.named(s),
                None => g,
            },
        })
    }

    /// A builtin family member such as `path:4`, `complete:3` or `vee`.
    #[staticmethod]
    fn builtin(spec: &str) -> PyResult<Self> {
        parse_builtin_spec(spec).map(|inner| PyGraph { inner }).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Graph::parse(text).map(|inner| PyGraph { inner }).map_err(err)
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    /// Arcs `(u, v)`; an undirected edge appears in both directions.
    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn is_symmetric(&self) -> bool {
        self.inner.is_symmetric()
    }

    fn is_chordal(&self) -> bool {
        self.inner.simple_closure().is_chordal()
    }

    fn is_series_parallel(&self) -> bool {
        self.inner.simple_closure().is_series_parallel()
    }

    fn max_cliques(&self) -> Vec<Vec<usize>> {
        self.inner.simple_closure().max_cliques().into_iter().map(|c| c.iter().collect()).collect()
    }

    fn __eq__(&self, other: &PyGraph) -> bool {
        self.inner.n() == other.inner.n() && self.inner.edges().eq(other.inner.edges())
    }

    fn __repr__(&self) -> String {
        format!("Graph(name={:?}, n={}, arcs={})", self.inner.name(), self.inner.n(), self.inner.edge_count())
    }
}

#[pyfunction]
fn hom_count(f: &PyGraph, t: &PyGraph) -> BigUint {
    hom::count_homs(&f.inner, &t.inner)
}

#[pyfunction]
#[pyo3(signature = (f, t, limit = 10_000))]
fn hom_list(f: &PyGraph, t: &PyGraph, limit: usize) -> PyResult<Vec<Vec<usize>>> {
    hom::enumerate_homs(&f.inner, &t.inner, limit).map_err(err)
}

#[pyfunction]
fn is_homomorphism(f: &PyGraph, t: &PyGraph, map: Vec<usize>) -> bool {
    hom::is_homomorphism(&f.inner, &t.inner, &map)
}

/// Result of one of the HDE programs.
#[pyclass(name = "HdeResult", module = "hde", frozen)]
pub struct PyHdeResult {
    inner: HdeResult,
}

#[pymethods]
impl PyHdeResult {
    /// The bound as a `Fraction`, or `None` when no homomorphism F → G exists.
    #[getter]
    fn value<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyAny>>> {
        self.inner.rational().map(|r| fraction(py, r)).transpose()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind.as_str()
    }

    #[getter]
    fn method(&self) -> String {
        self.inner.method.clone()
    }

    /// Optimal point as `{vertex tuple: Fraction}`, when the program has one.
    #[getter]
    fn primal<'py>(&self, py: Python<'py>) -> PyResult<Option<Bound<'py, PyDict>>> {
        let pairs: Vec<(VertexSet, Rational)> = match &self.inner.primal {
            None => return Ok(None),
            Some(Primal::Local { values, .. }) => values.clone(),
            Some(Primal::Full(f)) | Some(Primal::Q(f)) => {
                VertexSet::full(f.n()).subsets().filter(|a| !a.is_empty()).map(|a| (a, f.get(a).clone())).collect()
            }
        };
        set_function_dict(py, pairs).map(Some)
    }

    #[getter]
    fn certificate(&self) -> Option<PyCertificate> {
        self.inner.certificate.clone().map(|inner| PyCertificate { inner })
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __repr__(&self) -> String {
        format!("HdeResult(kind={}, value={})", self.inner.kind.as_str(), self.inner.to_json()["value"])
    }
}

#[pyfunction]
fn hde_lower(f: &PyGraph, g: &PyGraph) -> PyResult<PyHdeResult> {
    bounds::hde_lower_chordal(&f.inner, &g.inner).map(|inner| PyHdeResult { inner }).map_err(err)
}

#[pyfunction]
fn hde_upper(f: &PyGraph, g: &PyGraph) -> PyResult<PyHdeResult> {
    bounds::hde_upper(&f.inner, &g.inner).map(|inner| PyHdeResult { inner }).map_err(err)
}

#[pyfunction]
fn hde_exact(f: &PyGraph, g: &PyGraph) -> PyResult<PyHdeResult> {
    bounds::hde_exact(&f.inner, &g.inner).map(|inner| PyHdeResult { inner }).map_err(err)
}

/// `(best ratio, hom(F,T), hom(G,T), T)` over targets on at most `max_size` vertices.
#[pyfunction]
fn brute_force_upper(f: &PyGraph, g: &PyGraph, max_size: usize) -> PyResult<(f64, BigUint, BigUint, PyGraph)> {
    let b = bounds::brute_force_upper(&f.inner, &g.inner, max_size).map_err(err)?;
    Ok((b.value, b.hom_f, b.hom_g, PyGraph { inner: b.witness }))
}

#[pyfunction]
fn trivial_upper_bounds<'py>(py: Python<'py>, f: &PyGraph, g: &PyGraph) -> PyResult<Vec<Bound<'py, PyAny>>> {
    let bs = bounds::trivial_upper_bounds(&f.inner, &g.inner).map_err(err)?;
    bs.iter().map(|r| fraction(py, r)).collect()
}

#[pyfunction]
fn fractional_edge_cover<'py>(py: Python<'py>, g: &PyGraph) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &bounds::fractional_edge_cover(&g.inner).map_err(err)?)
}

#[pyfunction]
fn closed_form_paths<'py>(py: Python<'py>, m: usize, n: usize) -> PyResult<Option<Bound<'py, PyAny>>> {
    bounds::closed_form_paths(m, n).map(|r| fraction(py, &r)).transpose()
}

#[pyclass(name = "Certificate", module = "hde", frozen)]
pub struct PyCertificate {
    inner: Certificate,
}

#[pymethods]
impl PyCertificate {
    #[staticmethod]
    fn extract(f: &PyGraph, g: &PyGraph) -> PyResult<Self> {
        certificate::extract_certificate(&f.inner, &g.inner).map(|inner| PyCertificate { inner }).map_err(err)
    }

    #[staticmethod]
    fn builtin_p4(n: usize) -> PyResult<Self> {
        certificate::builtin_p4_certificate(n).map(|inner| PyCertificate { inner }).map_err(err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Certificate::from_json(&v).map(|inner| PyCertificate { inner }).map_err(err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[getter]
    fn exponent<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.exponent)
    }

    /// `(ok, certified exponent or None, reason or None)`.
    fn verify<'py>(&self, py: Python<'py>) -> PyResult<(bool, Option<Bound<'py, PyAny>>, Option<String>)> {
        let v = certificate::verify_certificate(&self.inner);
        Ok((v.ok, v.certified.map(|r| fraction(py, &r)).transpose()?, v.reason))
    }

    /// Checks the certified inequality on every target with at most `max_vertices` vertices.
    /// Returns `(targets checked, first failing targets)`.
    fn soundness(&self, py: Python<'_>, max_vertices: usize) -> PyResult<(usize, Vec<PyGraph>)> {
        let r = py.detach(|| certificate::exhaustive_soundness(&self.inner, max_vertices)).map_err(err)?;
        Ok((r.targets, r.failures.into_iter().map(|inner| PyGraph { inner }).collect()))
    }
}

#[pyclass(name = "ProjectedTarget", module = "hde", frozen)]
pub struct PyProjectedTarget {
    inner: ProjectedTarget,
}

#[pymethods]
impl PyProjectedTarget {
    #[getter]
    fn target(&self) -> PyGraph {
        PyGraph { inner: self.inner.target.clone() }
    }

    #[getter]
    fn base(&self) -> PyGraph {
        PyGraph { inner: self.inner.base.clone() }
    }

    #[getter]
    fn projection(&self) -> Vec<usize> {
        self.inner.projection.clone()
    }

    #[getter]
    fn scale(&self) -> u64 {
        self.inner.meta.scale
    }

    fn fiber_sizes(&self) -> Vec<usize> {
        self.inner.fiber_sizes()
    }

    fn projection_is_homomorphism(&self) -> bool {
        self.inner.projection_is_homomorphism()
    }

    /// Metadata, projection and sizes as JSON.
    fn sidecar(&self) -> String {
        self.inner.sidecar().to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "ProjectedTarget(kind={}, scale={}, vertices={})",
            self.inner.meta.kind,
            self.inner.meta.scale,
            self.inner.target.n()
        )
    }
}

/// Target built from a point `q` of Q(G), given as `{vertex tuple: value}`.
#[pyfunction]
fn build_tn_upper(py: Python<'_>, g: &PyGraph, q: &Bound<'_, PyDict>, n: u64) -> PyResult<PyProjectedTarget> {
    let q = to_set_function(g.inner.n(), q)?;
    let t = py.detach(|| constructions::build_Tn_upper(&g.inner, &q, n)).map_err(err)?;
    Ok(PyProjectedTarget { inner: t })
}

/// Target built from a point `p` of P(G) for series-parallel G; only clique values are read.
#[pyfunction]
fn build_tightness_target(py: Python<'_>, g: &PyGraph, p: &Bound<'_, PyDict>, n: u64, seed: u64) -> PyResult<PyProjectedTarget> {
    let p = to_set_function(g.inner.n(), p)?;
    let g = &g.inner;
    let t = py
        .detach(|| {
            if g.simple_closure().is_chordal() {
                return constructions::build_tightness_target(g, &p, n, seed);
            }
            let host = g.embed_in_2tree().ok_or_else(|| Error::NotSeriesParallel(g.name().to_string()))?;
            constructions::filter_to_series_parallel(&constructions::build_tightness_target(&host, &p, n, seed)?, g)
        })
        .map_err(err)?;
    Ok(PyProjectedTarget { inner: t })
}

#[pyfunction]
fn build_tn_p4(py: Python<'_>, n: usize, big_n: u64, seed: u64) -> PyResult<PyProjectedTarget> {
    let t = py.detach(|| constructions::build_TN_p4(n, big_n, seed)).map_err(err)?;
    Ok(PyProjectedTarget { inner: t })
}

/// Whether the uniform distribution on Hom(G, T) is a Markov random field over G.
#[pyfunction]
#[pyo3(signature = (g, t, tol = 1e-9))]
fn is_mrf(g: &PyGraph, t: &PyGraph, tol: f64) -> PyResult<bool> {
    let x = mrf::uniform_hom_distribution(&g.inner, &t.inner).map_err(err)?;
    mrf::is_mrf(&x, &g.inner, tol).map(|r| r.ok).map_err(err)
}

/// Entropy (in bits) of the uniform distribution on Hom(G, T).
#[pyfunction]
fn uniform_hom_entropy(g: &PyGraph, t: &PyGraph) -> PyResult<f64> {
    mrf::uniform_hom_distribution(&g.inner, &t.inner).map(|x| x.entropy()).map_err(err)
}

#[pymodule]
fn hde(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyHdeResult>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyProjectedTarget>()?;
    m.add_function(wrap_pyfunction!(hom_count, m)?)?;
    m.add_function(wrap_pyfunction!(hom_list, m)?)?;
    m.add_function(wrap_pyfunction!(is_homomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(hde_lower, m)?)?;
    m.add_function(wrap_pyfunction!(hde_upper, m)?)?;
    m.add_function(wrap_pyfunction!(hde_exact, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force_upper, m)?)?;
    m.add_function(wrap_pyfunction!(trivial_upper_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(fractional_edge_cover, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_paths, m)?)?;
    m.add_function(wrap_pyfunction!(build_tn_upper, m)?)?;
    m.add_function(wrap_pyfunction!(build_tightness_target, m)?)?;
    m.add_function(wrap_pyfunction!(build_tn_p4, m)?)?;
    m.add_function(wrap_pyfunction!(is_mrf, m)?)?;
    m.add_function(wrap_pyfunction!(uniform_hom_entropy, m)?)?;
    Ok(())
}
