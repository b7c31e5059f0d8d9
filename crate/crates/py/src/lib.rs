//! Python bindings: problems, bootstrap solutions and the oracle checks.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIndexError, PyValueError};
use pyo3::prelude::*;

use nullboot_core::bootstrap::{coeffs_in_n, BootstrapConfig, BootstrapSolution};
use nullboot_core::cli::{self, latex, Mode};
use nullboot_core::moments::ProblemSpec;
use nullboot_core::scalars::{FieldElem, ParamPoly};
use nullboot_core::weyl::OpPoly;

create_exception!(nullboot, NullbootError, PyException);

fn err(e: nullboot_core::Error) -> PyErr {
    NullbootError::new_err(e.to_string())
}

fn json<T: serde::Serialize>(v: &T) -> PyResult<String> {
    serde_json::to_string_pretty(v).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn coeff_strings(p: &ParamPoly) -> Vec<String> {
    coeffs_in_n(p).iter().map(FieldElem::to_string).collect()
}

/// An oscillator `H = p²/2 + x²/2 + g V`.
#[pyclass(name = "Problem", module = "nullboot", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProblem(ProblemSpec);

#[pymethods]
impl PyProblem {
    #[staticmethod]
    fn sextic() -> Self {
        PyProblem(ProblemSpec::sextic())
    }

    #[staticmethod]
    fn shifted() -> Self {
        PyProblem(ProblemSpec::shifted())
    }

    #[staticmethod]
    fn cubic() -> Self {
        PyProblem(ProblemSpec::cubic())
    }

    #[staticmethod]
    fn by_name(name: &str) -> PyResult<Self> {
        ProblemSpec::by_name(name).map(PyProblem).ok_or_else(|| PyValueError::new_err(format!("unknown problem {name:?}")))
    }

    /// A custom perturbation given as operator-polynomial JSON.
    #[staticmethod]
    fn custom(perturbation_json: &str, hermitian: bool, parity_even: bool) -> PyResult<Self> {
        let perturbation: OpPoly = serde_json::from_str(perturbation_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let p = ProblemSpec {
            label: "custom".into(),
            potential_base: OpPoly::mono(2, 0, FieldElem::frac(1, 2)),
            perturbation,
            hermitian,
            parity_even,
        };
        p.validate().map_err(err)?;
        Ok(PyProblem(p))
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label.clone()
    }

    #[getter]
    fn hermitian(&self) -> bool {
        self.0.hermitian
    }

    #[getter]
    fn parity_even(&self) -> bool {
        self.0.parity_even
    }

    fn hamiltonian(&self) -> String {
        self.0.hamiltonian().to_string()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("Problem({:?})", self.0.label)
    }
}

/// Energies and ladder operators through `max_order`.
#[pyclass(name = "Solution", module = "nullboot", frozen)]
struct PySolution(BootstrapSolution);

impl PySolution {
    fn order(&self, i: usize) -> PyResult<usize> {
        if i > self.0.max_order {
            return Err(PyIndexError::new_err(format!("order {i} > max_order {}", self.0.max_order)));
        }
        Ok(i)
    }
}

#[pymethods]
impl PySolution {
    #[getter]
    fn problem(&self) -> PyProblem {
        PyProblem(self.0.problem.clone())
    }

    #[getter]
    fn max_order(&self) -> usize {
        self.0.max_order
    }

    #[getter]
    fn k_schedule(&self) -> Vec<u32> {
        self.0.k_schedule.clone()
    }

    /// `E⁽ⁱ⁾` coefficients in `n`, constant first, as exact strings.
    fn energy(&self, i: usize) -> PyResult<Vec<String>> {
        Ok(coeff_strings(&self.0.energies[self.order(i)?]))
    }

    fn lower(&self, i: usize) -> PyResult<String> {
        Ok(self.0.lower[self.order(i)?].to_string())
    }

    fn raiser(&self, i: usize) -> PyResult<String> {
        Ok(self.0.raiser[self.order(i)?].to_string())
    }

    #[getter]
    fn verified(&self) -> bool {
        self.0.diagnostics.verification.passed()
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.0)
    }

    fn latex(&self) -> String {
        latex::solution_latex(&self.0)
    }

    /// Oracle comparison report as JSON.
    fn compare(&self) -> PyResult<String> {
        json(&nullboot_core::oracle::compare(&self.0).map_err(err)?)
    }

    fn __repr__(&self) -> String {
        format!("Solution({:?}, max_order={})", self.0.problem.label, self.0.max_order)
    }
}

#[pyfunction]
#[pyo3(signature = (problem, max_order=2, k_schedule=None))]
fn solve(py: Python<'_>, problem: &PyProblem, max_order: usize, k_schedule: Option<Vec<u32>>) -> PyResult<PySolution> {
    let config = BootstrapConfig { max_order, k_schedule, ..Default::default() };
    let spec = problem.0.clone();
    py.detach(move || nullboot_core::bootstrap::solve(&spec, &config)).map(PySolution).map_err(err)
}

/// Rayleigh–Schrödinger `E⁽ⁱ⁾` coefficients in `n`.
#[pyfunction]
fn rs_energy(problem: &PyProblem, order: usize) -> PyResult<Vec<String>> {
    Ok(coeff_strings(&nullboot_core::oracle::rs_energy(&problem.0, order).map_err(err)?))
}

/// g² energy coefficients from the equivalent Hermitian Hamiltonian.
#[pyfunction]
fn equiv_hermitian_energy(problem: &PyProblem) -> PyResult<Vec<String>> {
    Ok(coeff_strings(&nullboot_core::oracle::equiv_hermitian_energy(&problem.0).map_err(err)?))
}

#[pyfunction]
fn verify_v_conjugation(problem: &PyProblem, order: usize) -> PyResult<bool> {
    Ok(nullboot_core::oracle::verify_v_conjugation(&problem.0, order).map_err(err)?.passed)
}

/// Runs a JSON configuration; returns `(report_json, exit_code)`.
#[pyfunction]
#[pyo3(signature = (config_text, mode="solve"))]
fn run_config(py: Python<'_>, config_text: &str, mode: &str) -> PyResult<(String, i32)> {
    let mode: Mode =
        serde_json::from_value(serde_json::Value::from(mode)).map_err(|_| PyValueError::new_err(format!("unknown mode {mode:?}")))?;
    let config = cli::parse_config(config_text).map_err(err)?;
    let outcome = py.detach(move || cli::run(&config, mode));
    Ok((cli::render_report(&outcome.report), outcome.exit_code))
}

/// Exact perturbative null bootstrap.
#[pymodule]
fn nullboot(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("NullbootError", m.py().get_type::<NullbootError>())?;
    m.add_class::<PyProblem>()?;
    m.add_class::<PySolution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(rs_energy, m)?)?;
    m.add_function(wrap_pyfunction!(equiv_hermitian_energy, m)?)?;
    m.add_function(wrap_pyfunction!(verify_v_conjugation, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
