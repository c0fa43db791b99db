//! Python bindings for `qentangle`.
//!
//! Matrices cross the boundary as nested lists of Python `complex`; reports
//! come back as dicts decoded from the same JSON the CLI emits.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qentangle::audit::{run_audit, PhaseSampling};
use qentangle::concurrence::{class_terms, ClassTag, ClassifyConfig, GhzM1Enumeration, NormalizationPolicy};
use qentangle::entangler::{self, Branch, EntanglerMatrix};
use qentangle::povm::{self, PhaseSpec, QubitSetting};
use qentangle::qstate::{self, Bipartition, CanonicalKind, MultiQubitState};
use qentangle::tensor::{self, ComplexMatrix, ComplexVector};
use qentangle::{io, Error};

fn err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    m.entries().chunks_exact(m.cols()).map(<[Complex64]>::to_vec).collect()
}

fn from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(err)
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_setting(s: &str) -> PyResult<QubitSetting> {
    match s.to_ascii_lowercase().as_str() {
        "halfpi" | "y" => Ok(QubitSetting::HalfPi),
        "pi" | "x" => Ok(QubitSetting::Pi),
        "identity" | "i" => Ok(QubitSetting::Identity),
        other => Err(PyValueError::new_err(format!("unknown qubit setting {other:?}"))),
    }
}

fn parse_tag(name: &str, m: usize) -> PyResult<ClassTag> {
    match name.to_ascii_lowercase().as_str() {
        "w" => Ok(ClassTag::W(m)),
        "ghzm" | "ghz" => Ok(ClassTag::GhzM(m)),
        "ghzm1" => Ok(ClassTag::GhzM1(m)),
        other => Err(PyValueError::new_err(format!("unknown class {other:?}; use W, GHZm or GHZm1"))),
    }
}

fn config(tol: f64, norm: &str, ghzm1: &str) -> PyResult<ClassifyConfig> {
    let policy = match norm {
        "raw" => NormalizationPolicy::Raw,
        "canonical" => NormalizationPolicy::CanonicalUnit,
        other => return Err(PyValueError::new_err(format!("unknown normalization {other:?}"))),
    };
    let ghz_m1 = match ghzm1 {
        "compact" => GhzM1Enumeration::Compact,
        "full" => GhzM1Enumeration::Full,
        other => return Err(PyValueError::new_err(format!("unknown GHZ^(m-1) enumeration {other:?}"))),
    };
    Ok(ClassifyConfig { tol, policy, ghz_m1 })
}

/// Pure multi-qubit state; qubit 1 is the most significant bit.
#[pyclass(name = "State", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyState {
    inner: MultiQubitState,
}

#[pymethods]
impl PyState {
    #[new]
    #[pyo3(signature = (amplitudes, normalize = true))]
    fn new(amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() {
            return Err(PyValueError::new_err(format!("{dim} amplitudes is not a power of two")));
        }
        let v = ComplexVector::new(amplitudes).map_err(err)?;
        let inner = qstate::make_state(dim.trailing_zeros() as usize, v, normalize).map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn ghz(m: usize) -> PyResult<Self> {
        Ok(Self { inner: qstate::canonical_state(&CanonicalKind::Ghz, m).map_err(err)? })
    }

    #[staticmethod]
    fn w(m: usize) -> PyResult<Self> {
        Ok(Self { inner: qstate::canonical_state(&CanonicalKind::W, m).map_err(err)? })
    }

    #[staticmethod]
    fn basis(m: usize, x: usize) -> PyResult<Self> {
        Ok(Self { inner: qstate::canonical_state(&CanonicalKind::Basis(x), m).map_err(err)? })
    }

    #[staticmethod]
    fn product(factors: Vec<(Complex64, Complex64)>) -> PyResult<Self> {
        let m = factors.len();
        let factors = factors.into_iter().map(|(a, b)| [a, b]).collect();
        Ok(Self { inner: qstate::canonical_state(&CanonicalKind::Product(factors), m).map_err(err)? })
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.inner.num_qubits()
    }

    #[getter]
    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().entries().to_vec()
    }

    fn conjugate(&self) -> Self {
        Self { inner: qstate::conjugate_state(&self.inner) }
    }

    fn reduced_density(&self, keep: Vec<usize>) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(to_rows(&qstate::reduced_density(&self.inner, &keep).map_err(err)?))
    }

    #[pyo3(signature = (left, tol = 1e-10))]
    fn schmidt_rank(&self, left: Vec<usize>, tol: f64) -> PyResult<usize> {
        let cut = Bipartition::new(self.inner.num_qubits(), &left).map_err(err)?;
        qstate::schmidt_rank(&self.inner, &cut, tol).map_err(err)
    }

    #[pyo3(signature = (tol = 1e-10))]
    fn is_fully_separable(&self, tol: f64) -> bool {
        qstate::is_fully_separable(&self.inner, tol)
    }

    fn __repr__(&self) -> String {
        format!("State(m={})", self.inner.num_qubits())
    }
}

/// Block-diagonal entangler matrix.
#[pyclass(name = "Entangler", frozen)]
struct PyEntangler {
    inner: EntanglerMatrix,
}

#[pymethods]
impl PyEntangler {
    #[getter]
    fn m(&self) -> usize {
        self.inner.m
    }

    #[getter]
    fn unitary(&self) -> bool {
        self.inner.unitary
    }

    #[getter]
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        to_rows(&self.inner.matrix)
    }

    /// State produced from the uniform superposition.
    fn apply(&self) -> PyResult<PyState> {
        Ok(PyState { inner: entangler::apply_entangler(&self.inner).map_err(err)? })
    }
}

#[pyfunction]
fn kron(a: Vec<Vec<Complex64>>, b: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(to_rows(&tensor::kron(&from_rows(a)?, &from_rows(b)?).map_err(err)?))
}

#[pyfunction]
fn dagger(a: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
    Ok(to_rows(&tensor::dagger(&from_rows(a)?)))
}

#[pyfunction]
#[pyo3(signature = (a, tol = 1e-12))]
fn is_unitary(a: Vec<Vec<Complex64>>, tol: f64) -> PyResult<bool> {
    tensor::is_unitary(&from_rows(a)?, tol).map_err(err)
}

/// POVM element for `n` levels with every relative phase equal to `phi`.
#[pyfunction]
#[pyo3(signature = (phi, n = 2))]
fn delta(phi: f64, n: usize) -> PyResult<Vec<Vec<Complex64>>> {
    let spec = PhaseSpec::uniform(n, phi).map_err(err)?;
    Ok(to_rows(&povm::delta(&spec).map_err(err)?))
}

#[pyfunction]
#[pyo3(signature = (phi, n = 2))]
fn delta_tilde(phi: f64, n: usize) -> PyResult<Vec<Vec<Complex64>>> {
    let spec = PhaseSpec::uniform(n, phi).map_err(err)?;
    Ok(to_rows(&povm::delta_tilde(&spec).map_err(err)?))
}

#[pyfunction]
fn tensor_operator(settings: Vec<String>) -> PyResult<Vec<Vec<Complex64>>> {
    let settings = settings.iter().map(|s| parse_setting(s)).collect::<PyResult<Vec<_>>>()?;
    Ok(to_rows(povm::tensor_operator(&settings).map_err(err)?.matrix()))
}

#[pyfunction]
fn povm_resolution_check(n: usize, grid: usize) -> PyResult<f64> {
    povm::povm_resolution_check(n, grid).map_err(err)
}

#[pyfunction]
fn pair_term(state: &PyState, settings: Vec<String>) -> PyResult<f64> {
    let settings = settings.iter().map(|s| parse_setting(s)).collect::<PyResult<Vec<_>>>()?;
    let op = povm::tensor_operator(&settings).map_err(err)?;
    qentangle::pair_term(&state.inner, &op).map_err(err)
}

/// `(label, value)` for every operator of a class.
#[pyfunction]
#[pyo3(signature = (state, class_name, ghzm1 = "compact"))]
fn class_terms_of(state: &PyState, class_name: &str, ghzm1: &str) -> PyResult<Vec<(String, f64)>> {
    let tag = parse_tag(class_name, state.inner.num_qubits())?;
    let cfg = config(1e-10, "raw", ghzm1)?;
    let terms = class_terms(&state.inner, tag, cfg.ghz_m1).map_err(err)?;
    Ok(terms.into_iter().map(|(op, v)| (op.label, v)).collect())
}

#[pyfunction]
#[pyo3(signature = (state, class_name, norm = "canonical", ghzm1 = "compact"))]
fn class_concurrence(state: &PyState, class_name: &str, norm: &str, ghzm1: &str) -> PyResult<f64> {
    let tag = parse_tag(class_name, state.inner.num_qubits())?;
    let cfg = config(1e-10, norm, ghzm1)?;
    qentangle::concurrence::class_concurrence_with(&state.inner, tag, cfg.policy, cfg.ghz_m1).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (state, tol = 1e-10, norm = "canonical", ghzm1 = "compact"))]
fn classify<'py>(
    py: Python<'py>,
    state: &PyState,
    tol: f64,
    norm: &str,
    ghzm1: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let report = qentangle::classify(&state.inner, &config(tol, norm, ghzm1)?).map_err(err)?;
    json_to_py(py, &io::report_to_json(&report))
}

#[pyfunction]
#[pyo3(signature = (alphas, branch = "diag", strict = true))]
fn build_entangler(alphas: Vec<Complex64>, branch: &str, strict: bool) -> PyResult<PyEntangler> {
    let branch = match branch {
        "diag" => Branch::DiagonalBlocks,
        "antidiag" => Branch::AntiDiagonalBlocks,
        other => return Err(PyValueError::new_err(format!("unknown branch {other:?}"))),
    };
    let dim = alphas.len();
    if !dim.is_power_of_two() || dim < 2 {
        return Err(PyValueError::new_err(format!("{dim} amplitudes is not a power of two ≥ 2")));
    }
    let m = dim.trailing_zeros() as usize;
    Ok(PyEntangler { inner: entangler::build_entangler(m, &alphas, branch, strict).map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (ent, tol = 1e-10, norm = "canonical", ghzm1 = "compact"))]
fn verify_entangler<'py>(
    py: Python<'py>,
    ent: &PyEntangler,
    tol: f64,
    norm: &str,
    ghzm1: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let report = entangler::verify_built(ent.inner.clone(), None, &config(tol, norm, ghzm1)?).map_err(err)?;
    json_to_py(py, &io::entangler_report_to_json(&report))
}

#[pyfunction]
fn cz_gate() -> Vec<Vec<Complex64>> {
    to_rows(&entangler::cz_gate())
}

#[pyfunction]
fn hadamard_input(m: usize) -> PyResult<PyState> {
    Ok(PyState { inner: entangler::hadamard_input(m).map_err(err)? })
}

#[pyfunction]
#[pyo3(signature = (m, samples = 500, seed = 0, phases = "continuous", tol = 1e-10))]
fn audit<'py>(
    py: Python<'py>,
    m: usize,
    samples: usize,
    seed: u64,
    phases: &str,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let sampling = match phases {
        "continuous" => PhaseSampling::Continuous,
        "binary" => PhaseSampling::Binary,
        other => return Err(PyValueError::new_err(format!("unknown phase sampling {other:?}"))),
    };
    let report = run_audit(m, samples, seed, sampling, &config(tol, "canonical", "compact")?).map_err(err)?;
    json_to_py(py, &io::audit_to_json(&report))
}

#[pymodule]
fn qentangle_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_class::<PyEntangler>()?;
    m.add_function(wrap_pyfunction!(kron, m)?)?;
    m.add_function(wrap_pyfunction!(dagger, m)?)?;
    m.add_function(wrap_pyfunction!(is_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(delta, m)?)?;
    m.add_function(wrap_pyfunction!(delta_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(tensor_operator, m)?)?;
    m.add_function(wrap_pyfunction!(povm_resolution_check, m)?)?;
    m.add_function(wrap_pyfunction!(pair_term, m)?)?;
    m.add_function(wrap_pyfunction!(class_terms_of, m)?)?;
    m.add_function(wrap_pyfunction!(class_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(build_entangler, m)?)?;
    m.add_function(wrap_pyfunction!(verify_entangler, m)?)?;
    m.add_function(wrap_pyfunction!(cz_gate, m)?)?;
    m.add_function(wrap_pyfunction!(hadamard_input, m)?)?;
    m.add_function(wrap_pyfunction!(audit, m)?)?;
    Ok(())
}
