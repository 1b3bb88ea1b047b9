//! Python bindings for `dpmirror`. Structured reports are returned as plain
//! dicts and lists built from their JSON form.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use dpmirror::exactpoly::{parse_rational, rational_to_f64};
use dpmirror::interfam::{self, FamilySpec, SvgStyle, SweepOptions};
use dpmirror::pseudolattice::{self as pl, ExceptionalBasis};
use dpmirror::rootlattice::{self, IntLattice};
use dpmirror::vancycles::{self, expected_classes};
use dpmirror::weierstrass::{self, catalog, Variant};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let s = serde_json::to_string(value).map_err(err)?;
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

fn classes_for(d: u8) -> PyResult<Vec<vancycles::HomologyClass>> {
    expected_classes(d).ok_or_else(|| PyValueError::new_err(format!("degree must be 1, 2 or 3, got {d}")))
}

/// A class m·a + n·b in H₁ of the reference fiber.
#[pyclass(name = "HomologyClass", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyHomologyClass(vancycles::HomologyClass);

#[pymethods]
impl PyHomologyClass {
    #[new]
    fn new(m: i64, n: i64) -> Self {
        PyHomologyClass(vancycles::HomologyClass::new(m, n))
    }

    #[staticmethod]
    fn parse(s: &str) -> PyResult<Self> {
        s.parse().map(PyHomologyClass).map_err(err)
    }

    #[getter]
    fn m(&self) -> i64 {
        self.0.m
    }

    #[getter]
    fn n(&self) -> i64 {
        self.0.n
    }

    /// Intersection pairing ⟨self, other⟩.
    fn pair(&self, other: &PyHomologyClass) -> i64 {
        vancycles::h1_pair(&self.0, &other.0)
    }

    fn same_up_to_sign(&self, other: &PyHomologyClass) -> bool {
        self.0.same_up_to_sign(&other.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("HomologyClass('{}')", self.0)
    }
}

/// A word in left and right mutations, applied right to left.
#[pyclass(name = "MutationWord", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMutationWord(pl::MutationWord);

#[pymethods]
impl PyMutationWord {
    #[new]
    fn new(s: &str) -> PyResult<Self> {
        s.parse().map(PyMutationWord).map_err(err)
    }

    /// The reference word taking the vanishing-cycle basis of degree `d` to the del Pezzo basis.
    #[staticmethod]
    fn beta(d: u8) -> PyResult<Self> {
        pl::beta_word(d).map(PyMutationWord).map_err(err)
    }

    fn inverse(&self) -> Self {
        PyMutationWord(self.0.inverse())
    }

    fn reduced(&self) -> Self {
        PyMutationWord(self.0.reduced())
    }

    /// `self ∘ other`: apply `other` first.
    fn then_after(&self, other: &PyMutationWord) -> Self {
        PyMutationWord(self.0.then_after(&other.0))
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("MutationWord('{}')", self.0)
    }
}

/// A free Z-module with a non-degenerate, possibly non-symmetric bilinear form.
#[pyclass(name = "Pseudolattice", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPseudolattice(pl::Pseudolattice);

#[pymethods]
impl PyPseudolattice {
    #[new]
    fn new(gram: Vec<Vec<i64>>) -> PyResult<Self> {
        pl::Pseudolattice::new(gram).map(PyPseudolattice).map_err(err)
    }

    /// Pseudolattice, thimble basis and charge matrix spanned by boundary classes.
    #[staticmethod]
    fn from_boundaries(classes: Vec<PyHomologyClass>) -> PyResult<(Self, Vec<Vec<i64>>, Vec<Vec<i64>>)> {
        let cs: Vec<_> = classes.into_iter().map(|c| c.0).collect();
        let (p, b, c) = pl::from_boundaries(&cs).map_err(err)?;
        Ok((PyPseudolattice(p), b.vectors, c.matrix()))
    }

    /// The fibration pseudolattice of the degree-`d` mirror.
    #[staticmethod]
    fn fibration(d: u8) -> PyResult<Self> {
        let (p, _, _) = pl::from_boundaries(&classes_for(d)?).map_err(err)?;
        Ok(PyPseudolattice(p))
    }

    #[staticmethod]
    fn del_pezzo(ell: usize) -> PyResult<Self> {
        pl::Pseudolattice::new(pl::del_pezzo_gram(ell)).map(PyPseudolattice).map_err(err)
    }

    #[getter]
    fn gram(&self) -> Vec<Vec<i64>> {
        self.0.gram.clone()
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn pair(&self, u: Vec<i64>, v: Vec<i64>) -> i64 {
        self.0.pair(&u, &v)
    }

    fn serre(&self) -> PyResult<Vec<Vec<i64>>> {
        pl::serre(&self.0).map_err(err)
    }

    fn point_like(&self) -> PyResult<Vec<i64>> {
        pl::point_like(&self.0).map_err(err)
    }

    fn neron_severi(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &pl::neron_severi(&self.0).map_err(err)?)
    }

    fn is_exceptional(&self, basis: Vec<Vec<i64>>) -> bool {
        ExceptionalBasis { vectors: basis }.is_exceptional(&self.0)
    }

    /// Applies `word` to an exceptional basis given as rows of coordinates.
    fn mutate(&self, basis: Vec<Vec<i64>>, word: &PyMutationWord) -> PyResult<Vec<Vec<i64>>> {
        let out = pl::mutate(&self.0, &ExceptionalBasis { vectors: basis }, &word.0).map_err(err)?;
        Ok(out.vectors)
    }

    fn basis_gram(&self, basis: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
        ExceptionalBasis { vectors: basis }.gram(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Pseudolattice(rank={})", self.0.rank())
    }
}

#[pyfunction]
#[pyo3(signature = (d, epsilon=None))]
fn fiber_configuration(py: Python<'_>, d: u8, epsilon: Option<&str>) -> PyResult<Py<PyAny>> {
    let v = match epsilon {
        None => Variant::Exact,
        Some(e) => Variant::Perturbed(parse_rational(e).map_err(err)?),
    };
    let cfg = weierstrass::fiber_configuration(&catalog(d, &v).map_err(err)?).map_err(err)?;
    to_py(py, &cfg)
}

#[pyfunction]
#[pyo3(signature = (d, order=12))]
fn mirror_check(py: Python<'_>, d: u8, order: usize) -> PyResult<Py<PyAny>> {
    to_py(py, &dpmirror::periods::mirror_check(d, order).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (d, epsilon="1/100"))]
fn critical_values(d: u8, epsilon: &str) -> PyResult<Vec<Complex64>> {
    let w = catalog(d, &Variant::Perturbed(parse_rational(epsilon).map_err(err)?)).map_err(err)?;
    let l0 = rational_to_f64(&weierstrass::lambda0(d).map_err(err)?);
    vancycles::critical_values_ordered(&w, l0).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (d, epsilon="1/100"))]
fn vanishing_classes(d: u8, epsilon: &str) -> PyResult<Vec<PyHomologyClass>> {
    let data = vancycles::vanishing_classes(d, &parse_rational(epsilon).map_err(err)?).map_err(err)?;
    Ok(data.classes().into_iter().map(PyHomologyClass).collect())
}

#[pyfunction]
fn expected_vanishing_classes(d: u8) -> PyResult<Vec<PyHomologyClass>> {
    Ok(classes_for(d)?.into_iter().map(PyHomologyClass).collect())
}

#[pyfunction]
fn seifert_gram(classes: Vec<PyHomologyClass>) -> Vec<Vec<i64>> {
    let cs: Vec<_> = classes.into_iter().map(|c| c.0).collect();
    vancycles::seifert_gram(&cs)
}

#[pyfunction]
fn verify_theorem(py: Python<'_>, d: u8) -> PyResult<Py<PyAny>> {
    to_py(py, &pl::verify_theorem(d).map_err(err)?)
}

#[pyfunction]
fn ghs_sequences(ell: u8) -> PyResult<Vec<PyHomologyClass>> {
    Ok(pl::ghs_sequences(ell).map_err(err)?.into_iter().map(PyHomologyClass).collect())
}

#[pyfunction]
fn kernel_decomposition(py: Python<'_>, d: u8) -> PyResult<Py<PyAny>> {
    let (p, _, c) = pl::from_boundaries(&classes_for(d)?).map_err(err)?;
    to_py(py, &rootlattice::kernel_decomposition(&p, &c).map_err(err)?)
}

#[pyfunction]
fn kuznetsov_basis(py: Python<'_>, d: u8) -> PyResult<Py<PyAny>> {
    to_py(py, &rootlattice::kuznetsov_basis(d).map_err(err)?)
}

/// Root system of a definite integral lattice given by its Gram matrix.
#[pyfunction]
fn root_system(py: Python<'_>, gram: Vec<Vec<i64>>) -> PyResult<Py<PyAny>> {
    let l = IntLattice::new(gram).map_err(err)?;
    to_py(py, &rootlattice::root_system_identify(&l).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (d, budget=20000))]
fn norm_guided_search(d: u8, budget: usize) -> PyResult<Option<PyMutationWord>> {
    let (p, b, _) = pl::from_boundaries(&classes_for(d)?).map_err(err)?;
    let target = pl::del_pezzo_gram(9 - d as usize);
    Ok(pl::norm_guided_search(&p, &b, &target, budget).map(|r| PyMutationWord(r.word)))
}

/// Sweeps the interpolation family from degree `d` to `d - 1`.
#[pyfunction]
#[pyo3(signature = (d, samples=400))]
fn interpolate(py: Python<'_>, d: u8, samples: usize) -> PyResult<Py<PyAny>> {
    let fam = FamilySpec::standard(d).map_err(err)?;
    let t = interfam::sweep(&fam, &SweepOptions { samples, ..Default::default() }).map_err(err)?;
    let word = interfam::transposition_word(&t).ok().map(|w| w.to_string());
    let result = serde_json::json!({
        "family": t.family,
        "samples": t.samples,
        "endpoint_finite_counts": t.endpoint_finite_counts(),
        "tracks_leaving_infinity": t.tracks_leaving_infinity(),
        "candidate_word": word,
        "svg": interfam::render_svg(Some(&t), &SvgStyle::default()),
    });
    to_py(py, &result)
}

#[pymodule]
fn dpmirror_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHomologyClass>()?;
    m.add_class::<PyMutationWord>()?;
    m.add_class::<PyPseudolattice>()?;
    m.add_function(wrap_pyfunction!(fiber_configuration, m)?)?;
    m.add_function(wrap_pyfunction!(mirror_check, m)?)?;
    m.add_function(wrap_pyfunction!(critical_values, m)?)?;
    m.add_function(wrap_pyfunction!(vanishing_classes, m)?)?;
    m.add_function(wrap_pyfunction!(expected_vanishing_classes, m)?)?;
    m.add_function(wrap_pyfunction!(seifert_gram, m)?)?;
    m.add_function(wrap_pyfunction!(verify_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(ghs_sequences, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(kuznetsov_basis, m)?)?;
    m.add_function(wrap_pyfunction!(root_system, m)?)?;
    m.add_function(wrap_pyfunction!(norm_guided_search, m)?)?;
    m.add_function(wrap_pyfunction!(interpolate, m)?)?;
    Ok(())
}
