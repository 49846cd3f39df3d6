//! Python bindings. Structured results come back as plain dicts and lists.

use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::toric_hdi as core;
use core::builtin::parse_builtin;
use core::cohomology::cohomology_dims;
use core::contract::nef_ray_contractions;
use core::frobenius::{frobenius_summands, push_module};
use core::hdi::{self, HdiConfig};
use core::json::{FanJson, PresentationJson};
use core::{DivisorClass, Fan, LatticeBox, TDivisor, ToricError};

fn err(e: ToricError) -> PyErr {
    match e {
        ToricError::Incompatible { .. }
        | ToricError::NotFibration
        | ToricError::NotSmoothComplete
        | ToricError::TargetNotP1
        | ToricError::InvalidFan(_)
        | ToricError::InvalidArgument(_)
        | ToricError::DivisorLength { .. }
        | ToricError::ClassLength { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Hands a serializable value to Python through `json.loads`.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

#[pyclass(name = "ToricVariety", module = "toric_hdi", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyVariety {
    inner: Arc<core::ToricVariety>,
}

#[pymethods]
impl PyVariety {
    /// Builds a variety from rays and maximal cones.
    #[new]
    fn new(rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> PyResult<Self> {
        let dim = rays.first().map_or(0, |r| r.len());
        let fan = Fan::new(dim, rays, max_cones).map_err(err)?;
        Ok(PyVariety { inner: Arc::new(core::ToricVariety::new(fan).map_err(err)?) })
    }

    /// `projective:2`, `hirzebruch:1`, `product(A,B)`, `blowup(A;i,j)`.
    #[staticmethod]
    fn builtin(spec: &str) -> PyResult<Self> {
        Ok(PyVariety { inner: Arc::new(parse_builtin(spec).map_err(err)?) })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.inner.rays().to_vec()
    }

    #[getter]
    fn max_cones(&self) -> Vec<Vec<usize>> {
        self.inner.max_cones().to_vec()
    }

    #[getter]
    fn class_rank(&self) -> usize {
        self.inner.class_rank()
    }

    fn is_smooth(&self) -> bool {
        self.inner.is_smooth()
    }

    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    fn class_of(&self, divisor: Vec<i64>) -> PyResult<Vec<i64>> {
        let d = self.inner.divisor(divisor).map_err(err)?;
        Ok(self.inner.class_of(&d).0)
    }

    fn divisor_of_class(&self, class: Vec<i64>) -> Vec<i64> {
        self.inner.divisor_of_class(&DivisorClass(class)).0
    }

    /// `[h^0, ..., h^n]` of `O(D)`.
    fn cohomology(&self, divisor: Vec<i64>) -> PyResult<Vec<usize>> {
        let d = self.inner.divisor(divisor).map_err(err)?;
        cohomology_dims(&self.inner, &d).map_err(err)
    }

    fn lattice_points(&self, divisor: Vec<i64>) -> PyResult<Vec<Vec<i64>>> {
        let d = self.inner.divisor(divisor).map_err(err)?;
        self.inner.lattice_points(&d).map_err(err)
    }

    fn frobenius_summands<'py>(&self, py: Python<'py>, p: u32, divisor: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        let d = self.inner.divisor(divisor).map_err(err)?;
        to_py(py, &frobenius_summands(&self.inner, p, &d).map_err(err)?)
    }

    /// Pushes a presentation given as a dict (`target`, `source`, `entries`) and returns
    /// the pushed presentation in the same shape.
    fn frobenius_push_module<'py>(&self, py: Python<'py>, p: u32, presentation: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
        let text: String = py.import("json")?.call_method1("dumps", (presentation,))?.extract()?;
        let v = core::json::parse_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let pj: PresentationJson = core::json::from_value(&v, "").map_err(|e| PyValueError::new_err(e.to_string()))?;
        let m = pj.build(&self.inner, "").map_err(|e| PyValueError::new_err(e.to_string()))?;
        let pushed = push_module(&self.inner, p, &m).map_err(err)?;
        to_py(py, &PresentationJson::of(&pushed))
    }

    fn nef_ray_contractions(&self) -> PyResult<Vec<PyMorphism>> {
        Ok(nef_ray_contractions(&self.inner).map_err(err)?.into_iter().map(|c| PyMorphism { inner: c.morphism }).collect())
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &FanJson::of(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("ToricVariety(dim={}, rays={})", self.inner.dim(), self.inner.num_rays())
    }
}

#[pyclass(name = "ToricMorphism", module = "toric_hdi", frozen)]
struct PyMorphism {
    inner: core::ToricMorphism,
}

#[pymethods]
impl PyMorphism {
    #[new]
    fn new(target: &PyVariety, source: &PyVariety, matrix: Vec<Vec<i64>>) -> PyResult<Self> {
        let f = core::ToricMorphism::new(target.inner.clone(), source.inner.clone(), matrix).map_err(err)?;
        Ok(PyMorphism { inner: f })
    }

    #[getter]
    fn source(&self) -> PyVariety {
        PyVariety { inner: self.inner.source().clone() }
    }

    #[getter]
    fn target(&self) -> PyVariety {
        PyVariety { inner: self.inner.target().clone() }
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<i64>> {
        self.inner.matrix().to_vec()
    }

    fn is_fibration(&self) -> bool {
        self.inner.is_fibration()
    }

    fn pullback_divisor(&self, divisor: Vec<i64>) -> PyResult<Vec<i64>> {
        Ok(self.inner.pullback_divisor(&TDivisor(divisor)).map_err(err)?.0)
    }

    fn hdi_rank(&self, i: usize, divisor: Vec<i64>) -> PyResult<usize> {
        let d = self.inner.source().divisor(divisor).map_err(err)?;
        hdi::hdi_rank(&self.inner, i, &d, &HdiConfig::default()).map_err(err)
    }

    /// `(degrees, torsion)` of `R^i f_* O(D)` over the projective line.
    fn splitting_type_over_p1(&self, i: usize, divisor: Vec<i64>) -> PyResult<(Vec<i64>, usize)> {
        let d = self.inner.source().divisor(divisor).map_err(err)?;
        let st = hdi::splitting_type_over_p1(&self.inner, i, &d, &HdiConfig::default()).map_err(err)?;
        Ok((st.degrees, st.torsion))
    }

    /// `h^0` of `R^i f_* O(D)` twisted by each class in the cube `[lo, hi]^rank`.
    fn hdi_twist_table(&self, i: usize, divisor: Vec<i64>, lo: i64, hi: i64) -> PyResult<Vec<(Vec<i64>, usize)>> {
        let d = self.inner.source().divisor(divisor).map_err(err)?;
        let bx = LatticeBox::cube(self.inner.target().class_rank(), lo, hi);
        let t = hdi::hdi_twist_table(&self.inner, i, &d, &bx, &HdiConfig::default()).map_err(err)?;
        Ok(t.entries.into_iter().collect())
    }

    fn eigencharacters<'py>(&self, py: Python<'py>, i: usize, divisor: Vec<i64>) -> PyResult<Bound<'py, PyAny>> {
        let d = self.inner.source().divisor(divisor).map_err(err)?;
        to_py(py, &hdi::compute_eigencharacters(&self.inner, i, &d, &HdiConfig::default()).map_err(err)?.entries)
    }

    #[pyo3(signature = (i, divisor, lo=1, hi=6))]
    fn torsion_profile<'py>(&self, py: Python<'py>, i: usize, divisor: Vec<i64>, lo: i64, hi: i64) -> PyResult<Bound<'py, PyAny>> {
        let d = self.inner.source().divisor(divisor).map_err(err)?;
        to_py(py, &hdi::torsion_profile(&self.inner, i, &d, None, lo..=hi, &HdiConfig::default()).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("ToricMorphism({:?})", self.inner.matrix())
    }
}

#[pymodule]
fn toric_hdi(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyVariety>()?;
    m.add_class::<PyMorphism>()?;
    Ok(())
}
