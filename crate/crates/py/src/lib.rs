//! Python bindings for bundle-lab.

use lab::asymptotics::{self, TorusFamily};
use lab::bundle_graph::{self, Edge};
use lab::{crsf, heat_theta, zeta, Error};
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NonConvergence { .. } => PyArithmeticError::new_err(e.to_string()),
        Error::Io(_) => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn weight(z: Complex64) -> PyResult<bundle_graph::UnitWeight> {
    bundle_graph::UnitWeight::new(z).map_err(to_py)
}

fn zeta_dict<'py>(py: Python<'py>, e: zeta::ZetaEvaluation) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("value", e.value)?;
    d.set_item("error_estimate", e.error_estimate)?;
    d.set_item("method", e.method.name())?;
    Ok(d)
}

/// Discrete torus with a unitary line bundle.
#[pyclass(name = "TorusBundleSpec", frozen)]
struct PyTorus(bundle_graph::TorusBundleSpec);

#[pymethods]
impl PyTorus {
    /// Torus with one twisted edge per direction carrying holonomy `lambdas`.
    #[new]
    #[pyo3(signature = (sides, lambdas=None))]
    fn new(sides: Vec<usize>, lambdas: Option<Vec<f64>>) -> PyResult<Self> {
        let lambdas = lambdas.unwrap_or_else(|| vec![0.0; sides.len()]);
        bundle_graph::TorusBundleSpec::with_holonomies(sides, &lambdas).map(PyTorus).map_err(to_py)
    }

    /// Torus from explicit complex edge weights, `weights[i][j]` on `j → j+1`.
    #[staticmethod]
    fn from_weights(sides: Vec<usize>, weights: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let w = weights
            .into_iter()
            .map(|row| row.into_iter().map(weight).collect::<PyResult<Vec<_>>>())
            .collect::<PyResult<Vec<_>>>()?;
        bundle_graph::TorusBundleSpec::new(sides, w).map(PyTorus).map_err(to_py)
    }

    #[getter]
    fn sides(&self) -> Vec<usize> {
        self.0.sides().to_vec()
    }

    #[getter]
    fn holonomies(&self) -> Vec<f64> {
        self.0.holonomies().to_vec()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    fn eigenvalues(&self) -> Vec<f64> {
        bundle_graph::torus_eigenvalues(&self.0)
    }

    fn graph(&self) -> PyGraph {
        PyGraph(bundle_graph::build_torus(&self.0))
    }

    fn log_det(&self) -> PyResult<f64> {
        asymptotics::log_det(&self.0).map_err(to_py)
    }

    fn log_det_star(&self) -> PyResult<f64> {
        asymptotics::log_det_star(&self.0).map_err(to_py)
    }

    fn theta(&self, t: f64) -> f64 {
        heat_theta::theta_discrete(&self.0, t)
    }

    fn heat_kernel(&self, t: f64, x: Vec<i64>) -> PyResult<Complex64> {
        heat_theta::heat_kernel(&self.0, t, &x).map_err(to_py)
    }

    fn zeta(&self, s: Complex64) -> PyResult<Complex64> {
        zeta::zeta_gn(s, &self.0).map_err(to_py)
    }

    fn h_dn(&self) -> PyResult<f64> {
        asymptotics::h_dn(&self.0).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("TorusBundleSpec(sides={:?}, holonomies={:?})", self.0.sides(), self.0.holonomies())
    }
}

/// Finite graph with unit complex weights on oriented edges.
#[pyclass(name = "LineBundleGraph", frozen)]
struct PyGraph(bundle_graph::LineBundleGraph);

#[pymethods]
impl PyGraph {
    /// `edges` holds `(tail, head, weight)` triples.
    #[new]
    fn new(vertex_count: usize, edges: Vec<(usize, usize, Complex64)>) -> PyResult<Self> {
        let edges = edges
            .into_iter()
            .map(|(tail, head, w)| Ok(Edge { tail, head, weight: weight(w)? }))
            .collect::<PyResult<Vec<_>>>()?;
        bundle_graph::LineBundleGraph::new(vertex_count, edges).map(PyGraph).map_err(to_py)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.0.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.0.edge_count()
    }

    /// Dense bundle Laplacian as a list of rows.
    fn laplacian(&self) -> PyResult<Vec<Vec<Complex64>>> {
        let op = bundle_graph::laplacian(&self.0).map_err(to_py)?;
        let n = op.size();
        Ok((0..n).map(|r| (0..n).map(|c| op.entry(r, c)).collect()).collect())
    }

    fn determinant(&self) -> PyResult<f64> {
        Ok(bundle_graph::laplacian(&self.0).map_err(to_py)?.determinant().re)
    }

    fn kenyon_sum(&self) -> PyResult<f64> {
        crsf::kenyon_sum(&self.0).map_err(to_py)
    }

    #[pyo3(signature = (max_edges=crsf::DEFAULT_MAX_EDGES))]
    fn kenyon_check<'py>(&self, py: Python<'py>, max_edges: usize) -> PyResult<Bound<'py, PyDict>> {
        let k = crsf::kenyon_check(&self.0, max_edges).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("crsf_count", k.crsf_count)?;
        d.set_item("kenyon_sum", k.kenyon_sum)?;
        d.set_item("det", k.det)?;
        d.set_item("abs_err", k.abs_error)?;
        Ok(d)
    }
}

/// Limit torus with side ratios `alpha` and holonomies `lambdas`.
#[pyclass(name = "ContinuousTorusSpec", frozen)]
struct PyContinuous(heat_theta::ContinuousTorusSpec);

#[pymethods]
impl PyContinuous {
    #[new]
    fn new(alpha: Vec<f64>, lambdas: Vec<f64>) -> PyResult<Self> {
        heat_theta::ContinuousTorusSpec::new(alpha, lambdas).map(PyContinuous).map_err(to_py)
    }

    /// `form` is "auto", "spectral" or "dual".
    #[pyo3(signature = (t, form="auto"))]
    fn theta(&self, t: f64, form: &str) -> PyResult<f64> {
        let form = match form {
            "auto" => heat_theta::ThetaForm::Auto,
            "spectral" => heat_theta::ThetaForm::Spectral,
            "dual" => heat_theta::ThetaForm::Dual,
            other => return Err(PyValueError::new_err(format!("unknown theta form {other:?}"))),
        };
        heat_theta::theta_continuous(&self.0, t, form).map_err(to_py)
    }

    fn zeta<'py>(&self, py: Python<'py>, s: f64) -> PyResult<Bound<'py, PyDict>> {
        zeta_dict(py, zeta::zeta_eh(s, &self.0).map_err(to_py)?)
    }

    fn zeta_deriv0<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        zeta_dict(py, zeta::zeta_eh_deriv0(&self.0).map_err(to_py)?)
    }
}

#[pyfunction]
fn c_d<'py>(py: Python<'py>, d: usize) -> PyResult<Bound<'py, PyDict>> {
    zeta_dict(py, zeta::c_d(d).map_err(to_py)?)
}

#[pyfunction]
fn zeta_zd<'py>(py: Python<'py>, s: f64, d: usize) -> PyResult<Bound<'py, PyDict>> {
    zeta_dict(py, zeta::zeta_zd(s, d).map_err(to_py)?)
}

#[pyfunction]
fn zeta_zd_deriv0<'py>(py: Python<'py>, d: usize) -> PyResult<Bound<'py, PyDict>> {
    zeta_dict(py, zeta::zeta_zd_deriv0(d).map_err(to_py)?)
}

#[pyfunction]
fn kronecker_deriv0(alpha1: f64, alpha2: f64, lambda1: f64, lambda2: f64) -> PyResult<f64> {
    zeta::kronecker_deriv0(alpha1, alpha2, lambda1, lambda2).map_err(to_py)
}

#[pyfunction]
fn besselgen_sides(n: usize, z: Complex64, t: Complex64) -> PyResult<(Complex64, Complex64)> {
    heat_theta::besselgen_sides(n, z, t).map_err(to_py)
}

/// Residuals of the log-det asymptotics for a(n) = m·n.
#[pyfunction]
fn thm11_residuals(m: Vec<usize>, lambdas: Vec<f64>, ns: Vec<usize>) -> PyResult<Vec<f64>> {
    let f = TorusFamily::scaled(m, lambdas).map_err(to_py)?;
    Ok(asymptotics::thm11_residuals(&f, &ns).map_err(to_py)?.residuals)
}

/// Normalized residuals of the spectral-zeta asymptotics for a(n) = m·n.
#[pyfunction]
fn thm13_residuals(m: Vec<usize>, lambdas: Vec<f64>, s: f64, ns: Vec<usize>) -> PyResult<Vec<f64>> {
    let f = TorusFamily::scaled(m, lambdas).map_err(to_py)?;
    Ok(asymptotics::thm13_residuals(&f, s, &ns).map_err(to_py)?.residuals)
}

/// `(lhs, rhs)` of the determinant product formula, in logs.
#[pyfunction]
fn product_formula_check(m: Vec<usize>, n: usize, z: Vec<Complex64>) -> PyResult<(f64, f64)> {
    let z = z.into_iter().map(weight).collect::<PyResult<Vec<_>>>()?;
    let c = asymptotics::product_formula_check(&m, n, &z).map_err(to_py)?;
    Ok((c.lhs, c.rhs))
}

/// Load a torus or graph document.
#[pyfunction]
fn load_spec(py: Python<'_>, path: std::path::PathBuf) -> PyResult<Py<PyAny>> {
    Ok(match lab::load_spec(path).map_err(to_py)? {
        lab::SpecDocument::Torus(t) => Py::new(py, PyTorus(t))?.into_any(),
        lab::SpecDocument::Graph(g) => Py::new(py, PyGraph(g))?.into_any(),
    })
}

#[pymodule]
fn bundle_lab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTorus>()?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyContinuous>()?;
    m.add_function(wrap_pyfunction!(c_d, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_zd, m)?)?;
    m.add_function(wrap_pyfunction!(zeta_zd_deriv0, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker_deriv0, m)?)?;
    m.add_function(wrap_pyfunction!(besselgen_sides, m)?)?;
    m.add_function(wrap_pyfunction!(thm11_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(thm13_residuals, m)?)?;
    m.add_function(wrap_pyfunction!(product_formula_check, m)?)?;
    m.add_function(wrap_pyfunction!(load_spec, m)?)?;
    Ok(())
}
