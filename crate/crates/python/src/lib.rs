//! Python bindings. Exact rationals cross the boundary as `"num/den"` strings.

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use valdist_core::cli::{self, commands::evaluate_csv, Grid};
use valdist_core::scalar::{fmt_scalar, parse_scalar, Scalar};
use valdist_core::series::{Series, Valuation};
use valdist_core::smt::{self, Theorem};

fn err(e: valdist_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn scalar(s: &str) -> PyResult<Scalar> {
    parse_scalar(s).map_err(err)
}

fn strings(xs: &[Scalar]) -> Vec<String> {
    xs.iter().map(fmt_scalar).collect()
}

/// Exact piecewise-linear function on a closed interval.
#[pyclass(name = "PlFun", module = "valdist", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPlFun(valdist_core::PlFun);

#[pymethods]
impl PyPlFun {
    #[getter]
    fn breakpoints(&self) -> Vec<String> {
        strings(self.0.breakpoints())
    }

    #[getter]
    fn values(&self) -> Vec<String> {
        strings(self.0.values())
    }

    #[getter]
    fn slopes(&self) -> Vec<String> {
        strings(&self.0.slopes())
    }

    fn eval(&self, t: &str) -> PyResult<String> {
        self.0.eval(&scalar(t)?).map(|v| fmt_scalar(&v)).map_err(err)
    }

    fn is_constant(&self) -> bool {
        self.0.is_constant()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        self.0.to_string()
    }
}

/// Result of checking the three bounds on a scenario.
#[pyclass(name = "Report", module = "valdist", frozen)]
struct PyReport(smt::VerificationReport);

#[pymethods]
impl PyReport {
    /// `"verified"` or `"conditionally verified"`.
    #[getter]
    fn status(&self) -> &'static str {
        match self.0.status {
            smt::VerificationStatus::Verified => "verified",
            smt::VerificationStatus::Conditional => "conditionally verified",
        }
    }

    #[getter]
    fn assumptions(&self) -> Vec<String> {
        self.0.assumptions.clone()
    }

    #[getter]
    fn characteristic(&self) -> PyPlFun {
        PyPlFun(self.0.characteristic.clone())
    }

    #[getter]
    fn lhs(&self) -> PyPlFun {
        PyPlFun(self.0.lhs.clone())
    }

    #[getter]
    fn sharpness_ratio(&self) -> Option<String> {
        self.0.sharpness_ratio.as_ref().map(fmt_scalar)
    }

    fn proximity(&self, name: &str) -> PyResult<PyPlFun> {
        self.0
            .hypersurfaces
            .iter()
            .find(|h| h.name == name)
            .map(|h| PyPlFun(h.proximity.clone()))
            .ok_or_else(|| PyKeyError::new_err(name.to_string()))
    }

    /// `(coefficient, applicable, c_min, holds)` for `"quang"`, `"levin"` or `"new"`.
    fn bound(&self, theorem: &str) -> PyResult<(String, bool, String, bool)> {
        let t = match theorem {
            "quang" => Theorem::Quang,
            "levin" => Theorem::Levin,
            "new" => Theorem::New,
            other => return Err(PyKeyError::new_err(other.to_string())),
        };
        let b = self.0.bound(t);
        Ok((fmt_scalar(&b.coefficient), b.applicable, fmt_scalar(&b.c_min), b.holds))
    }

    fn to_json(&self) -> String {
        self.0.to_json()
    }
}

/// A map, a list of hypersurfaces and a domain of radii.
#[pyclass(name = "Scenario", module = "valdist", frozen)]
struct PyScenario(cli::Scenario);

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        cli::parse_scenario(text).map(PyScenario).map_err(err)
    }

    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        cli::builtin(name).map(PyScenario).map_err(err)
    }

    fn to_json(&self) -> String {
        cli::serialize_scenario(&self.0)
    }

    #[getter]
    fn name(&self) -> Option<String> {
        self.0.name.clone()
    }

    #[getter]
    fn q(&self) -> usize {
        self.0.q()
    }

    #[getter]
    fn degrees(&self) -> Vec<u32> {
        self.0.degrees()
    }

    /// `(t_seq, general_position, M, M_status, alpha)`.
    fn invariants(&self) -> PyResult<(Vec<i64>, bool, u32, String, String)> {
        let r = smt::verify(&self.0).map_err(err)?;
        Ok((
            r.t_seq.clone(),
            r.general_position,
            r.multiplicity.m,
            r.multiplicity.status.clone(),
            fmt_scalar(&r.alpha),
        ))
    }

    fn verify(&self) -> PyResult<PyReport> {
        smt::verify(&self.0).map(PyReport).map_err(err)
    }

    /// CSV table of `T`, `m_j`, `N_j` on the grid `a:b:k`.
    fn evaluate(&self, grid: &str) -> PyResult<String> {
        let g = Grid::parse(grid).map_err(err)?;
        evaluate_csv(&self.0, &g).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Scenario({:?}, q={})", self.0.name.as_deref().unwrap_or(""), self.0.q())
    }
}

/// `t ↦ log_p |f|_r` for the polynomial with the given coefficients.
#[pyfunction]
#[pyo3(signature = (coeffs, p, t_min, t_max))]
fn gauss_norm(coeffs: Vec<String>, p: u64, t_min: &str, t_max: &str) -> PyResult<PyPlFun> {
    let v = Valuation::padic(p).map_err(err)?;
    let cs = coeffs.iter().map(|c| scalar(c)).collect::<PyResult<Vec<_>>>()?;
    let g = Series::polynomial(cs, v).gauss_norm(&scalar(t_min)?, &scalar(t_max)?).map_err(err)?;
    Ok(PyPlFun(g.norm))
}

#[pyfunction]
fn builtin_names() -> Vec<&'static str> {
    cli::builtin_names().collect()
}

#[pymodule]
fn valdist(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPlFun>()?;
    m.add_class::<PyReport>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(gauss_norm, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_names, m)?)?;
    Ok(())
}
