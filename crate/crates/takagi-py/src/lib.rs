//! Python bindings: polynomials, root finding, the inclusion region, and
//! per-zero certificates, with complex numbers crossing as Python `complex`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use takagi::region::ConvexRegion;
use takagi::roots::RootMultiset;
use takagi::theorem;

fn err(e: takagi::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Polynomial", from_py_object)]
#[derive(Clone)]
struct PyPolynomial {
    inner: takagi::Polynomial,
}

#[pymethods]
impl PyPolynomial {
    /// Coefficients ascending: [c0, c1, ...] represents c0 + c1 z + ...
    #[new]
    fn new(coeffs: Vec<Complex64>) -> Self {
        PyPolynomial { inner: takagi::Polynomial::new(coeffs) }
    }

    #[staticmethod]
    fn from_roots(lead: Complex64, roots: Vec<Complex64>) -> Self {
        PyPolynomial { inner: takagi::Polynomial::from_roots(lead, &roots) }
    }

    fn coeffs(&self) -> Vec<Complex64> {
        self.inner.coeffs().to_vec()
    }

    fn degree(&self) -> Option<usize> {
        self.inner.degree()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn evaluate(&self, z: Complex64) -> Complex64 {
        self.inner.evaluate(z)
    }

    #[pyo3(signature = (k = 1))]
    fn derivative(&self, k: usize) -> Self {
        PyPolynomial { inner: self.inner.derivative(k) }
    }

    fn origin_multiplicity(&self) -> PyResult<usize> {
        self.inner.origin_multiplicity().map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({:?})", self.inner.coeffs())
    }
}

#[pyfunction]
fn differential_compose(f: &PyPolynomial, g: &PyPolynomial) -> PyPolynomial {
    PyPolynomial { inner: takagi::poly::differential_compose(&f.inner, &g.inner) }
}

/// Zeros with multiplicity and the residuals |p(zero)|.
#[pyfunction]
fn find_roots(p: &PyPolynomial) -> PyResult<(Vec<Complex64>, Vec<f64>)> {
    let rs = takagi::roots::find_roots(&p.inner).map_err(err)?;
    Ok((rs.roots, rs.residuals))
}

fn region_dict<'py>(py: Python<'py>, region: &ConvexRegion) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("kind", region.kind())?;
    d.set_item("vertices", region.vertices())?;
    Ok(d)
}

/// Full pipeline: h = f(D) g, its zeros, the inclusion region, containment.
#[pyfunction]
#[pyo3(signature = (f, g, tol = None))]
fn analyze<'py>(
    py: Python<'py>,
    f: &PyPolynomial,
    g: &PyPolynomial,
    tol: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let inst = theorem::analyze(&f.inner, &g.inner, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("r", inst.r)?;
    d.set_item("n", inst.n)?;
    d.set_item("alphas", inst.alphas.roots.clone())?;
    d.set_item("h", inst.h.coeffs().to_vec())?;
    d.set_item("identically_zero", inst.identically_zero)?;
    match &inst.region {
        Some(region) => d.set_item("region", region_dict(py, region)?)?,
        None => d.set_item("region", py.None())?,
    }
    match &inst.h_zeros {
        Some(zeros) => d.set_item("zeros", zeros.roots.clone())?,
        None => d.set_item("zeros", py.None())?,
    }
    d.set_item("margins", inst.margins.clone())?;
    d.set_item("tol", inst.tol)?;
    d.set_item("contained", inst.contained)?;
    Ok(d)
}

/// Convex certificate for a zero z of g' - alpha g against the zeros of g.
#[pyfunction]
fn certificate<'py>(
    py: Python<'py>,
    z: Complex64,
    g_roots: Vec<Complex64>,
    alpha: Complex64,
) -> PyResult<Bound<'py, PyDict>> {
    let residuals = vec![0.0; g_roots.len()];
    let rs = RootMultiset { roots: g_roots, residuals };
    let cert = theorem::certificate(z, &rs, alpha).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("lambdas", cert.lambdas.clone())?;
    d.set_item("kappa", cert.kappa)?;
    d.set_item("reconstruction", cert.reconstruction)?;
    d.set_item("schwarz_bound", cert.schwarz_bound)?;
    d.set_item("reconstruction_error", cert.reconstruction_error(z))?;
    Ok(d)
}

/// Zeros of g' - alpha g for g = z^2 - beta^2, as (near, far).
#[pyfunction]
fn quadratic_closed_form(alpha: Complex64, beta: Complex64) -> PyResult<(Complex64, Complex64)> {
    theorem::quadratic_closed_form(alpha, beta).map_err(err)
}

#[pymodule]
fn takagi_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_function(wrap_pyfunction!(differential_compose, m)?)?;
    m.add_function(wrap_pyfunction!(find_roots, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(certificate, m)?)?;
    m.add_function(wrap_pyfunction!(quadratic_closed_form, m)?)?;
    Ok(())
}
