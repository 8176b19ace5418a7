use std::sync::Arc;

use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyComplex;

use weil_core::canonical::{reduction_iso, weil_rep, CanonicalSpace};
use weil_core::cyclotomic::{gauss_sum_unreduced, psi};
use weil_core::intertwine::{canonical_t, TMethod};
use weil_core::symplectic::{OrientedSubspace, SymplecticMap, SymplecticSpace};
use weil_core::verify::{gauss_identity, run_suite, Suite, VerifyConfig};
use weil_core::{CycMatrix, CycNum, Error};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// An exact element of Q(ζ_p).
#[pyclass(name = "Cyc", module = "weil", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCyc(CycNum);

#[pymethods]
impl PyCyc {
    /// ζ_p^e.
    #[staticmethod]
    fn root(p: u64, e: u64) -> PyResult<Self> {
        psi(e % p, p).map(PyCyc).map_err(err)
    }

    #[staticmethod]
    fn integer(p: u64, c: i64) -> Self {
        PyCyc(CycNum::from_int(p, c))
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.order()
    }

    /// Coefficients of 1, ζ, …, ζ^{p-2} as (numerator, denominator) strings.
    fn coeffs(&self) -> Vec<(String, String)> {
        self.0
            .coeffs()
            .iter()
            .map(|c| (c.numer().to_string(), c.denom().to_string()))
            .collect()
    }

    fn __complex__<'py>(&self, py: Python<'py>) -> Bound<'py, PyComplex> {
        let (re, im) = self.0.to_float();
        PyComplex::from_doubles(py, re, im)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_add(&other.0).map(PyCyc).map_err(err)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_sub(&other.0).map(PyCyc).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_mul(&other.0).map(PyCyc).map_err(err)
    }

    fn __truediv__(&self, other: &Self) -> PyResult<Self> {
        self.0.checked_div(&other.0).map(PyCyc).map_err(err)
    }

    fn __pow__(&self, e: u32, _modulo: Option<u32>) -> Self {
        PyCyc(self.0.pow(e))
    }

    fn conj(&self) -> Self {
        PyCyc(self.0.conj())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Cyc({})", self.0)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.hash(&mut h);
        h.finish()
    }
}

/// An exact matrix over Q(ζ_p).
#[pyclass(name = "Matrix", module = "weil", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyMatrix(CycMatrix);

#[pymethods]
impl PyMatrix {
    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }

    fn __getitem__(&self, idx: (usize, usize)) -> PyResult<PyCyc> {
        let (i, j) = idx;
        if i >= self.0.rows() || j >= self.0.cols() {
            return Err(PyIndexError::new_err(format!("({i}, {j}) out of range")));
        }
        Ok(PyCyc(self.0[(i, j)].clone()))
    }

    fn __matmul__(&self, other: &Self) -> PyResult<Self> {
        if self.0.cols() != other.0.rows() {
            return Err(err(Error::DimensionMismatch { expected: self.0.cols(), found: other.0.rows() }));
        }
        Ok(PyMatrix(self.0.mul(&other.0)))
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    /// Nested lists of Python complex numbers.
    fn to_complex(&self) -> Vec<Vec<(f64, f64)>> {
        (0..self.0.rows())
            .map(|i| (0..self.0.cols()).map(|j| self.0[(i, j)].to_float()).collect())
            .collect()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("plain data")
    }

    fn __repr__(&self) -> String {
        format!("Matrix({}x{})", self.0.rows(), self.0.cols())
    }
}

/// The canonical space H(V) for V = F_p^{2n}.
#[pyclass(name = "Space", module = "weil", frozen)]
struct PySpace {
    space: SymplecticSpace,
    holder: Arc<CanonicalSpace>,
}

impl PySpace {
    fn subspace(&self, text: &str) -> PyResult<OrientedSubspace> {
        OrientedSubspace::parse(text, self.space.p(), self.space.dim()).map_err(err)
    }
}

#[pymethods]
impl PySpace {
    #[new]
    fn new(p: u64, n: usize) -> PyResult<Self> {
        let space = SymplecticSpace::standard(p, n).map_err(err)?;
        let holder = CanonicalSpace::new(&space).map_err(err)?;
        Ok(PySpace { space, holder })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.space.p()
    }

    #[getter]
    fn n(&self) -> usize {
        self.space.n()
    }

    /// The base oriented Lagrangian of the canonical space.
    #[getter]
    fn base(&self) -> String {
        self.holder.base().to_string()
    }

    #[pyo3(signature = (oriented = true))]
    fn lagrangians(&self, oriented: bool) -> PyResult<Vec<String>> {
        Ok(if oriented {
            self.space.oriented_lagrangians().map_err(err)?.iter().map(ToString::to_string).collect()
        } else {
            self.space.lagrangians().map_err(err)?.iter().map(ToString::to_string).collect()
        })
    }

    /// T from the model at `source` to the model at `target`; `method` is
    /// "closed" or "chained".
    #[pyo3(signature = (target, source, method = "closed"))]
    fn t(&self, target: &str, source: &str, method: &str) -> PyResult<PyMatrix> {
        let method = match method {
            "closed" => TMethod::ClosedForm,
            "chained" => TMethod::Chained,
            other => return Err(PyValueError::new_err(format!("unknown method '{other}'"))),
        };
        let (m, l) = (self.subspace(target)?, self.subspace(source)?);
        let t = canonical_t(&self.space, &m, &l, method).map_err(err)?;
        Ok(PyMatrix(t.matrix().clone()))
    }

    /// ρ(g) on the base model; `g` is "g=a,b;c,d" (row-major).
    fn rho(&self, g: &str) -> PyResult<PyMatrix> {
        let g = SymplecticMap::parse(g, &self.space).map_err(err)?;
        Ok(PyMatrix(weil_rep(&self.holder, &g).map_err(err)?.mat))
    }

    /// dim H(V)^I for an oriented isotropic subspace I.
    fn invariant_dim(&self, isotropic: &str) -> PyResult<usize> {
        let iso = self.subspace(isotropic)?;
        Ok(reduction_iso(&self.holder, &iso).map_err(err)?.invariant.cols())
    }

    fn __repr__(&self) -> String {
        format!("Space(p={}, n={})", self.space.p(), self.space.n())
    }
}

/// The quadratic Gauss sum G₁ as an exact number.
#[pyfunction]
fn gauss_sum(p: u64) -> PyResult<PyCyc> {
    weil_core::gauss_sum(p).map(PyCyc).map_err(err)
}

/// Term-by-term text of G₁ before reduction, e.g. "1 + 2ζ^2".
#[pyfunction]
fn gauss_sum_text(p: u64) -> PyResult<String> {
    gauss_sum_unreduced(p).map_err(err)
}

/// Both sides of G₁^{2n} = p^n·σ((−1)^n).
#[pyfunction]
fn gauss_check(p: u64, n: usize) -> PyResult<(PyCyc, PyCyc)> {
    let (l, r) = gauss_identity(p, n).map_err(err)?;
    Ok((PyCyc(l), PyCyc(r)))
}

/// Run a verification suite and return the report as a dict.
#[pyfunction]
#[pyo3(signature = (suite, p, dim, seed = 0, samples = 500))]
fn verify<'py>(py: Python<'py>, suite: &str, p: u64, dim: usize, seed: u64, samples: usize) -> PyResult<Bound<'py, PyAny>> {
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(PyValueError::new_err(format!("dim must be even and positive, got {dim}")));
    }
    let suite: Suite = suite.parse().map_err(err)?;
    let mut cfg = VerifyConfig::new(p, dim / 2);
    cfg.seed = seed;
    cfg.samples = samples;
    let report = py.detach(|| run_suite(suite, &cfg)).map_err(err)?;
    json_to_py(py, &report.to_json())
}

#[pymodule]
pub fn weil(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCyc>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PySpace>()?;
    m.add_function(wrap_pyfunction!(gauss_sum, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_sum_text, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
